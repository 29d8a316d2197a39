//! Key-value text form of an [`OrderingConfig`]:
//!
//! ```text
//! # comment
//! kind = lpo
//! precedence = * > f0 > b > a
//! weights = f0:2, a:1
//! default_weight = 1
//! variable_weight = 1
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use super::{KboConfig, OrderingConfig, OrderingError, OrderingKind, Precedence};
use crate::term::MUL;

fn symbol_name(raw: &str) -> String {
    // TPTP spelling of the magma operation
    if raw == "mul" {
        MUL.to_string()
    } else {
        raw.to_string()
    }
}

/// Parses `"f > b > a"` (greatest first). `mul` is read as `*`.
pub fn parse_precedence(text: &str) -> Result<Precedence, OrderingError> {
    let names: Vec<String> = text
        .split('>')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(symbol_name)
        .collect();
    Precedence::from_greatest_first(names)
}

fn weights_at_line(text: &str, line: usize) -> Result<BTreeMap<String, u32>, OrderingError> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, w) = item.rsplit_once([':', '=']).ok_or_else(|| OrderingError::Config {
            line,
            message: format!("expected `symbol:weight`, found `{item}`"),
        })?;
        let w = w.trim().parse().map_err(|_| OrderingError::Config {
            line,
            message: format!("bad weight `{w}`"),
        })?;
        out.insert(symbol_name(name.trim()), w);
    }
    Ok(out)
}

/// Parses `"f:2, a:1"`. `mul` is read as `*`.
pub fn parse_weights(text: &str) -> Result<BTreeMap<String, u32>, OrderingError> {
    weights_at_line(text, 0)
}

impl FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<OrderingKind, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kbo" => Ok(OrderingKind::Kbo),
            "lpo" => Ok(OrderingKind::Lpo),
            other => Err(format!("unknown ordering kind `{other}`")),
        }
    }
}

impl OrderingConfig {
    /// Reads the key-value config format. Weights are only meaningful for KBO.
    pub fn parse(text: &str) -> Result<OrderingConfig, OrderingError> {
        let mut kind = None;
        let mut precedence = None;
        let mut kbo = KboConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| OrderingError::Config {
                line,
                message: "expected `key = value`".into(),
            })?;
            let value = value.trim();
            let number = |v: &str| {
                v.parse::<u32>().map_err(|_| OrderingError::Config {
                    line,
                    message: format!("bad number `{v}`"),
                })
            };
            match key.trim() {
                "kind" => {
                    kind = Some(
                        value
                            .parse()
                            .map_err(|message| OrderingError::Config { line, message })?,
                    )
                }
                "precedence" => precedence = Some(parse_precedence(value)?),
                "weights" => kbo.weights = weights_at_line(value, line)?,
                "default_weight" => kbo.default_weight = number(value)?,
                "variable_weight" => kbo.variable_weight = number(value)?,
                other => {
                    return Err(OrderingError::Config {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let precedence = precedence.ok_or(OrderingError::Config {
            line: 0,
            message: "missing `precedence`".into(),
        })?;
        Ok(match kind.unwrap_or(OrderingKind::Kbo) {
            OrderingKind::Lpo => OrderingConfig::lpo(precedence),
            OrderingKind::Kbo => OrderingConfig::kbo(precedence, kbo),
        })
    }

    /// Inverse of [`OrderingConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("kind = {}\nprecedence = {}\n", self.kind, self.precedence);
        if let Some(kbo) = &self.kbo {
            let weights: Vec<String> = kbo.weights.iter().map(|(n, w)| format!("{n}:{w}")).collect();
            if !weights.is_empty() {
                out.push_str(&format!("weights = {}\n", weights.join(", ")));
            }
            out.push_str(&format!(
                "default_weight = {}\nvariable_weight = {}\n",
                kbo.default_weight, kbo.variable_weight
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inline_precedence() {
        let p = parse_precedence("f>b>a").unwrap();
        assert_eq!(p.greatest_first(), ["f", "b", "a"]);
        assert!(p.rank("f") > p.rank("b"));
        let p = parse_precedence("mul > f0 > a").unwrap();
        assert_eq!(p.greatest_first()[0], "*");
        assert!(matches!(
            parse_precedence("a > b > a"),
            Err(OrderingError::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn config_file_round_trip() {
        let text = "# sample\nkind = kbo\nprecedence = * > f0 > a\nweights = f0:2, a:1\nvariable_weight = 1\n";
        let cfg = OrderingConfig::parse(text).unwrap();
        assert_eq!(cfg.kind, OrderingKind::Kbo);
        assert_eq!(cfg.kbo.as_ref().unwrap().weight("f0"), 2);
        assert_eq!(OrderingConfig::parse(&cfg.to_text()).unwrap(), cfg);

        let lpo = OrderingConfig::parse("kind = lpo\nprecedence = f > a").unwrap();
        assert_eq!(lpo.kind, OrderingKind::Lpo);
        assert_eq!(OrderingConfig::parse(&lpo.to_text()).unwrap(), lpo);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let err = OrderingConfig::parse("kind = lpo\nprecedence f > a").unwrap_err();
        assert!(matches!(err, OrderingError::Config { line: 2, .. }));
        assert!(OrderingConfig::parse("kind = rpo\nprecedence = a").is_err());
        assert!(OrderingConfig::parse("kind = lpo").is_err());
    }
}
