//! Delta and delta-delta regression coefficients.

/// Two-tap regression deltas with edge replication:
/// `d_t = sum_{n=1..2} n (c_{t+n} - c_{t-n}) / (2 sum n^2)`.
fn deltas_of(matrix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let frames = matrix.len();
    let clamp = |t: i64| -> usize { t.clamp(0, frames as i64 - 1) as usize };
    let denom = 2.0 * (1.0 + 4.0);
    (0..frames)
        .map(|t| {
            let t = t as i64;
            (0..matrix[0].len())
                .map(|d| {
                    let mut num = 0.0;
                    for n in 1..=2i64 {
                        num += n as f64
                            * (matrix[clamp(t + n)][d] - matrix[clamp(t - n)][d]);
                    }
                    num / denom
                })
                .collect()
        })
        .collect()
}

/// Concatenate [static | delta | delta-delta] per frame.
pub fn compute_deltas(matrix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if matrix.is_empty() {
        return Vec::new();
    }
    let d1 = deltas_of(matrix);
    let d2 = deltas_of(&d1);
    matrix
        .iter()
        .zip(d1.iter().zip(d2.iter()))
        .map(|(s, (v, a))| {
            let mut row = Vec::with_capacity(s.len() * 3);
            row.extend_from_slice(s);
            row.extend_from_slice(v);
            row.extend_from_slice(a);
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_rows_give_zero_deltas() {
        let matrix = vec![vec![3.0, -1.0]; 5];
        let out = compute_deltas(&matrix);
        for row in &out {
            assert_eq!(row.len(), 6);
            assert_eq!(&row[0..2], &[3.0, -1.0]);
            assert!(row[2..].iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn ramp_gives_unit_delta_in_the_interior() {
        let matrix: Vec<Vec<f64>> = (0..12).map(|t| vec![t as f64]).collect();
        let out = compute_deltas(&matrix);
        // Edge replication reaches 2 frames into the deltas and 4 into the
        // delta-deltas.
        for row in out.iter().take(12 - 2).skip(2) {
            assert_eq!(row[1], 1.0, "delta");
        }
        for row in out.iter().take(12 - 4).skip(4) {
            assert_eq!(row[2], 0.0, "delta-delta");
        }
    }

    #[test]
    fn single_frame_has_zero_deltas() {
        let out = compute_deltas(&[vec![5.0, 7.0]]);
        assert_eq!(out, vec![vec![5.0, 7.0, 0.0, 0.0, 0.0, 0.0]]);
    }

    #[test]
    fn static_columns_pass_through() {
        let matrix = vec![vec![1.0, 2.0], vec![4.0, 8.0], vec![9.0, 27.0]];
        let out = compute_deltas(&matrix);
        for (orig, row) in matrix.iter().zip(out.iter()) {
            assert_eq!(&row[0..2], orig.as_slice());
        }
    }
}
