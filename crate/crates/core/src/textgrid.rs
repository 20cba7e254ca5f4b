//! Praat TextGrid long text format, interval tiers only.

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub xmin: f64,
    pub xmax: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTier {
    pub name: String,
    pub intervals: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub tiers: Vec<IntervalTier>,
}

impl TextGrid {
    pub fn tier(&self, name: &str) -> Option<&IntervalTier> {
        self.tiers.iter().find(|t| t.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        for tier in &self.tiers {
            let mut prev = None::<f64>;
            for (i, interval) in tier.intervals.iter().enumerate() {
                let bad_bounds = interval.xmin < self.xmin - EPS
                    || interval.xmax > self.xmax + EPS
                    || interval.xmax < interval.xmin;
                let gap = prev
                    .map(|p| (interval.xmin - p).abs() > EPS)
                    .unwrap_or(false);
                if bad_bounds || gap {
                    return Err(Error::NonContiguousIntervals {
                        tier: tier.name.clone(),
                        index: i + 1,
                    });
                }
                prev = Some(interval.xmax);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parsing

struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn line_no(&self) -> usize {
        self.pos
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        while self.pos < self.lines.len() {
            let line = self.lines[self.pos].trim();
            self.pos += 1;
            if !line.is_empty() {
                return Some((self.pos, line));
            }
        }
        None
    }

    /// Next content line as `key = value`; the key must match.
    fn kv(&mut self, key: &str) -> Result<(usize, String)> {
        let (line_no, line) = self.next_content().ok_or(Error::TextGridParse {
            line: self.line_no(),
            reason: format!("expected `{key} = ...`, found end of file"),
        })?;
        let (k, v) = line.split_once('=').ok_or(Error::TextGridParse {
            line: line_no,
            reason: format!("expected `{key} = ...`, found `{line}`"),
        })?;
        if k.trim() != key {
            return Err(Error::TextGridParse {
                line: line_no,
                reason: format!("expected key `{key}`, found `{}`", k.trim()),
            });
        }
        Ok((line_no, v.trim().to_string()))
    }

    fn number(&mut self, key: &str) -> Result<f64> {
        let (line_no, v) = self.kv(key)?;
        v.parse().map_err(|_| Error::TextGridParse {
            line: line_no,
            reason: format!("bad number `{v}`"),
        })
    }

    fn string(&mut self, key: &str) -> Result<String> {
        let (line_no, v) = self.kv(key)?;
        unquote(&v).ok_or(Error::TextGridParse {
            line: line_no,
            reason: format!("expected quoted string, found `{v}`"),
        })
    }

    fn header(&mut self, expect: &str) -> Result<()> {
        let (line_no, line) = self.next_content().ok_or(Error::TextGridParse {
            line: self.line_no(),
            reason: format!("expected `{expect}`"),
        })?;
        if !line.starts_with(expect) {
            return Err(Error::TextGridParse {
                line: line_no,
                reason: format!("expected `{expect}`, found `{line}`"),
            });
        }
        Ok(())
    }
}

fn unquote(v: &str) -> Option<String> {
    let inner = v.strip_prefix('"')?.strip_suffix('"')?;
    Some(inner.replace("\"\"", "\""))
}

fn quote(v: &str) -> String {
    format!("\"{}\"", v.replace('"', "\"\""))
}

pub fn parse_textgrid(text: &str) -> Result<TextGrid> {
    let mut c = Cursor::new(text);
    let file_type = c.string("File type")?;
    if file_type != "ooTextFile" {
        return Err(Error::TextGridParse {
            line: 1,
            reason: format!("unsupported file type `{file_type}`"),
        });
    }
    let class = c.string("Object class")?;
    if class != "TextGrid" {
        return Err(Error::TextGridParse {
            line: 2,
            reason: format!("not a TextGrid object (`{class}`)"),
        });
    }
    let xmin = c.number("xmin")?;
    let xmax = c.number("xmax")?;
    c.header("tiers?")?;
    let size = c.number("size")? as usize;
    c.header("item []")?;

    let mut tiers = Vec::with_capacity(size);
    for _ in 0..size {
        c.header("item [")?;
        let class = c.string("class")?;
        if class != "IntervalTier" {
            return Err(Error::UnsupportedTierType(class));
        }
        let name = c.string("name")?;
        let _tier_xmin = c.number("xmin")?;
        let _tier_xmax = c.number("xmax")?;
        let interval_count = {
            let (line_no, line) = c.next_content().ok_or(Error::TextGridParse {
                line: c.line_no(),
                reason: "expected `intervals: size = ...`".into(),
            })?;
            let v = line.split('=').nth(1).ok_or(Error::TextGridParse {
                line: line_no,
                reason: format!("expected `intervals: size = ...`, found `{line}`"),
            })?;
            v.trim().parse::<usize>().map_err(|_| Error::TextGridParse {
                line: line_no,
                reason: format!("bad interval count `{}`", v.trim()),
            })?
        };
        let mut intervals = Vec::with_capacity(interval_count);
        for _ in 0..interval_count {
            c.header("intervals [")?;
            let xmin = c.number("xmin")?;
            let xmax = c.number("xmax")?;
            let label = c.string("text")?;
            intervals.push(Interval { xmin, xmax, label });
        }
        tiers.push(IntervalTier { name, intervals });
    }

    let grid = TextGrid { xmin, xmax, tiers };
    grid.validate()?;
    Ok(grid)
}

pub fn write_textgrid(grid: &TextGrid) -> String {
    let mut out = String::new();
    out.push_str("File type = \"ooTextFile\"\n");
    out.push_str("Object class = \"TextGrid\"\n\n");
    out.push_str(&format!("xmin = {}\n", grid.xmin));
    out.push_str(&format!("xmax = {}\n", grid.xmax));
    out.push_str("tiers? <exists>\n");
    out.push_str(&format!("size = {}\n", grid.tiers.len()));
    out.push_str("item []:\n");
    for (i, tier) in grid.tiers.iter().enumerate() {
        out.push_str(&format!("    item [{}]:\n", i + 1));
        out.push_str("        class = \"IntervalTier\"\n");
        out.push_str(&format!("        name = {}\n", quote(&tier.name)));
        out.push_str(&format!("        xmin = {}\n", grid.xmin));
        out.push_str(&format!("        xmax = {}\n", grid.xmax));
        out.push_str(&format!(
            "        intervals: size = {}\n",
            tier.intervals.len()
        ));
        for (k, interval) in tier.intervals.iter().enumerate() {
            out.push_str(&format!("        intervals [{}]:\n", k + 1));
            out.push_str(&format!("            xmin = {}\n", interval.xmin));
            out.push_str(&format!("            xmax = {}\n", interval.xmax));
            out.push_str(&format!("            text = {}\n", quote(&interval.label)));
        }
    }
    out
}
