//! Expected locus kinds per family, shipped as `key = value` text files.

use std::collections::BTreeSet;

use crate::error::ParseError;
use crate::families::Family;
use crate::geometry::ConicKind;

/// One `key = value` entry with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KvLine<'a> {
    pub line: usize,
    pub key: &'a str,
    pub value: &'a str,
}

/// Split text into `key = value` entries; blank lines and `#` comments are skipped.
pub fn parse_kv_lines(text: &str) -> Result<Vec<KvLine<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return Err(ParseError::new(i + 1, 1, "expected 'key = value'"));
        };
        let key = raw[..eq].trim();
        if key.is_empty() {
            return Err(ParseError::new(i + 1, 1, "empty key"));
        }
        out.push(KvLine {
            line: i + 1,
            key,
            value: raw[eq + 1..].trim(),
        });
    }
    Ok(out)
}

/// Parse `1, 2, 5` into indices. `column` is where `value` starts on its line.
pub fn parse_index_list(value: &str, line: usize, column: usize) -> Result<Vec<u32>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in value.split(',') {
        let t = part.trim();
        if !t.is_empty() {
            let at = column + offset + part.len() - part.trim_start().len();
            let k: u32 = t.parse().map_err(|_| ParseError::new(line, at, format!("bad index '{t}'")))?;
            if k == 0 {
                return Err(ParseError::new(line, at, "index must be positive"));
            }
            out.push(k);
        }
        offset += part.len() + 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub family: Family,
    pub ellipses: BTreeSet<u32>,
    pub circles: BTreeSet<u32>,
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut family = None;
        let mut ellipses = None;
        let mut circles = None;
        for kv in parse_kv_lines(text)? {
            let col = 1;
            let dup = |seen: bool| {
                if seen {
                    Err(ParseError::new(kv.line, col, format!("duplicate key '{}'", kv.key)))
                } else {
                    Ok(())
                }
            };
            match kv.key {
                "family" => {
                    dup(family.is_some())?;
                    family = Some(kv.value.parse::<Family>().map_err(|e| ParseError::new(kv.line, col, e.to_string()))?);
                }
                "ellipses" => {
                    dup(ellipses.is_some())?;
                    ellipses = Some(parse_index_list(kv.value, kv.line, col)?);
                }
                "circles" => {
                    dup(circles.is_some())?;
                    circles = Some(parse_index_list(kv.value, kv.line, col)?);
                }
                other => return Err(ParseError::new(kv.line, col, format!("unknown key '{other}'"))),
            }
        }
        let family = family.ok_or_else(|| ParseError::new(1, 1, "missing 'family'"))?;
        let ellipses: BTreeSet<u32> = ellipses.unwrap_or_default().into_iter().collect();
        let circles: BTreeSet<u32> = circles.unwrap_or_default().into_iter().collect();
        if let Some(k) = ellipses.intersection(&circles).next() {
            return Err(ParseError::new(1, 1, format!("X{k} listed as both ellipse and circle")));
        }
        Ok(Fixture {
            family,
            ellipses,
            circles,
        })
    }

    pub fn builtin(family: Family) -> Option<Fixture> {
        let text = match family {
            Family::Confocal => include_str!("../data/fixtures/confocal.txt"),
            Family::Incircle => include_str!("../data/fixtures/incircle.txt"),
            Family::Circumcircle => include_str!("../data/fixtures/circumcircle.txt"),
            Family::Homothetic => include_str!("../data/fixtures/homothetic.txt"),
            Family::Dual => include_str!("../data/fixtures/dual.txt"),
            Family::Excentral => include_str!("../data/fixtures/excentral.txt"),
            Family::Custom => return None,
        };
        Some(Fixture::parse(text).expect("built-in fixture parses"))
    }

    pub fn expected(&self, k: u32) -> Option<ConicKind> {
        if self.ellipses.contains(&k) {
            Some(ConicKind::Ellipse)
        } else if self.circles.contains(&k) {
            Some(ConicKind::Circle)
        } else {
            None
        }
    }

    pub fn indices(&self) -> BTreeSet<u32> {
        self.ellipses.union(&self.circles).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for fam in Family::NAMED {
            let f = Fixture::builtin(fam).unwrap();
            assert_eq!(f.family, fam);
            assert!(!f.ellipses.is_empty());
        }
        let inc = Fixture::builtin(Family::Incircle).unwrap();
        assert_eq!(inc.expected(3), Some(ConicKind::Circle));
        assert_eq!(inc.expected(2), Some(ConicKind::Ellipse));
        assert_eq!(inc.expected(1), None);
        assert_eq!(Fixture::builtin(Family::Confocal).unwrap().ellipses.len(), 42);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Fixture::parse("ellipses = 1").is_err());
        assert!(Fixture::parse("family = nope").is_err());
        assert!(Fixture::parse("family = dual\nellipses = 1, x").is_err());
        assert!(Fixture::parse("family = dual\nellipses = 1\ncircles = 1").is_err());
        assert!(Fixture::parse("family = dual\nfamily = dual").is_err());
        assert!(Fixture::parse("family = dual\nbogus").is_err());
        let err = Fixture::parse("family = dual\n\n shapes = 1").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn index_lists() {
        assert_eq!(parse_index_list("1, 2,3 ,", 1, 1).unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_index_list("", 1, 1).unwrap(), Vec::<u32>::new());
        assert_eq!(parse_index_list("1, 0", 4, 10).unwrap_err().column, 13);
    }
}
