//! JSON form of certificates and action specs.
//!
//! Words are strings (`a`–`z` generators, `A`–`Z` inverses, `1` the
//! identity), pairs are `(h,k)`, points of disjoint unions are `j:point`,
//! `ε` is a `p/q` string and permutations are 0-indexed image arrays.

use std::collections::{BTreeMap, HashMap};
use std::sync::LazyLock;

use regex::{Captures, Regex};
use serde::{Deserialize, Serialize};

use crate::actions::{Action, ActionSpec, GroupElement};
use crate::builder::{Certificate, OrbitWitness, Provenance, SoficApproximation};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::word::Word;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionJson {
    Coset {
        rank: usize,
        #[serde(default)]
        subgroup: Vec<String>,
    },
    Biregular {
        rank: usize,
    },
    Restricted {
        inner: Box<ActionJson>,
        images: Vec<String>,
    },
    DisjointUnion {
        parts: Vec<ActionJson>,
    },
}

impl ActionJson {
    pub fn from_spec(spec: &ActionSpec) -> Self {
        match spec {
            ActionSpec::Coset { rank, subgroup } => {
                ActionJson::Coset { rank: *rank, subgroup: subgroup.iter().map(Word::to_string).collect() }
            }
            ActionSpec::Biregular { rank } => ActionJson::Biregular { rank: *rank },
            ActionSpec::Restricted { inner, images } => ActionJson::Restricted {
                inner: Box::new(ActionJson::from_spec(inner)),
                images: images.iter().map(GroupElement::to_string).collect(),
            },
            ActionSpec::DisjointUnion { parts } => {
                ActionJson::DisjointUnion { parts: parts.iter().map(ActionJson::from_spec).collect() }
            }
        }
    }

    /// Checked conversion; errors carry the field path below `path`.
    pub fn to_spec(&self, path: &str) -> Result<ActionSpec> {
        let spec = match self {
            ActionJson::Coset { rank, subgroup } => {
                check_rank(*rank, &format!("{path}.rank"))?;
                let subgroup = subgroup
                    .iter()
                    .enumerate()
                    .map(|(i, w)| Word::parse(w, *rank).map_err(|e| Error::malformed(format!("{path}.subgroup[{i}]"), e.to_string())))
                    .collect::<Result<_>>()?;
                ActionSpec::Coset { rank: *rank, subgroup }
            }
            ActionJson::Biregular { rank } => {
                check_rank(*rank, &format!("{path}.rank"))?;
                ActionSpec::Biregular { rank: *rank }
            }
            ActionJson::Restricted { inner, images } => {
                let inner = inner.to_spec(&format!("{path}.inner"))?;
                if images.is_empty() {
                    return Err(Error::malformed(format!("{path}.images"), "at least one generator image is required"));
                }
                let shape = inner.group();
                let images = images
                    .iter()
                    .enumerate()
                    .map(|(i, g)| GroupElement::parse(g, shape).map_err(|e| Error::malformed(format!("{path}.images[{i}]"), e.to_string())))
                    .collect::<Result<_>>()?;
                ActionSpec::Restricted { inner: Box::new(inner), images }
            }
            ActionJson::DisjointUnion { parts } => ActionSpec::DisjointUnion {
                parts: parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.to_spec(&format!("{path}.parts[{i}]")))
                    .collect::<Result<_>>()?,
            },
        };
        spec.validate().map_err(|e| Error::malformed(path, e.to_string()))?;
        Ok(spec)
    }
}

fn check_rank(rank: usize, path: &str) -> Result<()> {
    if rank == 0 || rank > crate::word::MAX_TEXT_RANK {
        return Err(Error::malformed(path, Error::InvalidRank(rank).to_string()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    action: ActionJson,
    #[serde(rename = "F")]
    f: Vec<String>,
    #[serde(rename = "E")]
    e: Vec<String>,
    epsilon: String,
    carrier_size: usize,
    generator_images: Vec<Vec<usize>>,
    #[serde(rename = "S")]
    s: Vec<usize>,
    #[serde(rename = "B")]
    b: Vec<String>,
    pi: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    phi_overrides: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    provenance: Provenance,
}

pub fn parse_rational(text: &str, path: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|e| Error::malformed(path, format!("expected a rational p/q, got {text:?} ({e})")))
}

static NUMERIC_ARRAY: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[\s*\d+(?:\s*,\s*\d+)*\s*\]").unwrap());
static SPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+").unwrap());

/// Pretty JSON with arrays of integers kept on one line.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let pretty = serde_json::to_string_pretty(value).expect("serialisable");
    let collapsed = NUMERIC_ARRAY.replace_all(&pretty, |c: &Captures| {
        SPACE.replace_all(&c[0], "").replace(',', ", ")
    });
    format!("{collapsed}\n")
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let json = CertificateJson {
            action: ActionJson::from_spec(&self.action),
            f: self.f.iter().map(GroupElement::to_string).collect(),
            e: self.e.iter().map(ToString::to_string).collect(),
            epsilon: self.epsilon.to_string(),
            carrier_size: self.approx.carrier_size,
            generator_images: self.approx.generator_images.iter().map(Perm::to_vec).collect(),
            s: self.witness.support.clone(),
            b: self.witness.labels.clone(),
            pi: self.witness.pi.clone(),
            phi_overrides: self.approx.overrides.iter().map(|(g, p)| (g.to_string(), p.to_vec())).collect(),
            provenance: self.provenance.clone(),
        };
        to_pretty_json(&json)
    }

    /// Parses and validates a certificate; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Certificate> {
        let mut de = serde_json::Deserializer::from_str(text);
        let json: CertificateJson = serde_path_to_error::deserialize(&mut de)
            .map_err(|e| Error::malformed(e.path().to_string(), e.inner().to_string()))?;
        de.end().map_err(|e| Error::malformed(".", e.to_string()))?;
        let spec = json.action.to_spec("action")?;
        let action = Action::new(&spec).map_err(|e| Error::malformed("action", e.to_string()))?;
        let shape = action.group();

        let f = json
            .f
            .iter()
            .enumerate()
            .map(|(i, g)| action.parse_element(g).map_err(|e| Error::malformed(format!("F[{i}]"), e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mut e = Vec::with_capacity(json.e.len());
        let mut seen = HashMap::new();
        for (i, x) in json.e.iter().enumerate() {
            let point = action.parse_point(x).map_err(|err| Error::malformed(format!("E[{i}]"), err.to_string()))?;
            if let Some(j) = seen.insert(point.clone(), i) {
                return Err(Error::malformed(format!("E[{i}]"), format!("same point as E[{j}]")));
            }
            e.push(point);
        }
        let epsilon = parse_rational(&json.epsilon, "epsilon")?;

        let n = json.carrier_size;
        if n == 0 {
            return Err(Error::malformed("carrier_size", "carrier must be non-empty"));
        }
        if json.generator_images.len() != shape.generator_count() {
            return Err(Error::malformed(
                "generator_images",
                format!("{} images for {shape}, expected {}", json.generator_images.len(), shape.generator_count()),
            ));
        }
        let perm = |images: &Vec<usize>, path: String| -> Result<Perm> {
            if images.len() != n {
                return Err(Error::malformed(path, format!("{} entries, carrier size {n}", images.len())));
            }
            Perm::from_images(images.clone()).map_err(|e| Error::malformed(path, e.to_string()))
        };
        let generator_images = json
            .generator_images
            .iter()
            .enumerate()
            .map(|(i, p)| perm(p, format!("generator_images[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut approx = SoficApproximation::new(shape, n, generator_images, json.provenance.strategy)
            .map_err(|e| Error::malformed("generator_images", e.to_string()))?;
        for (key, images) in &json.phi_overrides {
            let path = format!("phi_overrides.{key}");
            let g = action.parse_element(key).map_err(|e| Error::malformed(path.clone(), e.to_string()))?;
            approx.overrides.insert(g, perm(images, path)?);
        }

        let mut in_support = vec![false; n];
        for (i, &s) in json.s.iter().enumerate() {
            if s >= n {
                return Err(Error::malformed(format!("S[{i}]"), format!("{s} is outside 0..{n}")));
            }
            if std::mem::replace(&mut in_support[s], true) {
                return Err(Error::malformed(format!("S[{i}]"), format!("{s} is repeated")));
            }
        }
        let mut labels = HashMap::new();
        for (i, l) in json.b.iter().enumerate() {
            if let Some(j) = labels.insert(l, i) {
                return Err(Error::malformed(format!("B[{i}]"), format!("label {l:?} repeats B[{j}]")));
            }
        }
        if json.pi.len() != json.s.len() {
            return Err(Error::malformed("pi", format!("{} rows for {} entries of S", json.pi.len(), json.s.len())));
        }
        for (i, row) in json.pi.iter().enumerate() {
            if row.len() != e.len() {
                return Err(Error::malformed(format!("pi[{i}]"), format!("{} entries for {} points of E", row.len(), e.len())));
            }
            if let Some(j) = row.iter().position(|&b| b >= json.b.len()) {
                return Err(Error::malformed(format!("pi[{i}][{j}]"), format!("{} is outside B", row[j])));
            }
        }

        Ok(Certificate {
            action: spec,
            f,
            e,
            epsilon,
            approx,
            witness: OrbitWitness { support: json.s, labels: json.b, pi: json.pi },
            provenance: json.provenance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::Point;
    use crate::builder::{approximate, BuildOptions};

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn sample() -> Certificate {
        let spec = ActionSpec::Coset { rank: 2, subgroup: vec![w("a")] };
        let f = vec![GroupElement::Single(w("a")), GroupElement::Single(w("b"))];
        let e = vec![Point::Word(w("1")), Point::Word(w("b"))];
        approximate(&spec, &f, &e, Rational::new(1, 10), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn round_trip() {
        let cert = sample();
        let text = cert.to_json();
        assert_eq!(Certificate::from_json(&text).unwrap(), cert);
        assert!(text.contains("\"epsilon\": \"1/10\""));
        assert!(text.contains("\"generator_images\": [\n    [0, 1],"), "{text}");
    }

    #[test]
    fn action_json_round_trip() {
        for spec in [
            ActionSpec::conjugation(2),
            ActionSpec::DisjointUnion {
                parts: vec![ActionSpec::Coset { rank: 2, subgroup: vec![w("ab")] }, ActionSpec::Coset { rank: 2, subgroup: vec![] }],
            },
        ] {
            let json = ActionJson::from_spec(&spec);
            let text = serde_json::to_string(&json).unwrap();
            let back: ActionJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_spec("action").unwrap(), spec);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let text = sample().to_json();
        let truncated = &text[..text.len() / 2];
        assert!(matches!(Certificate::from_json(truncated), Err(Error::Malformed { .. })));

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["generator_images"][1] = serde_json::json!([0, 0]);
        let err = Certificate::from_json(&value.to_string()).unwrap_err();
        assert!(matches!(err, Error::Malformed { ref path, .. } if path == "generator_images[1]"), "{err}");

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["pi"][0][1] = serde_json::json!(7);
        let err = Certificate::from_json(&value.to_string()).unwrap_err();
        assert!(matches!(err, Error::Malformed { ref path, .. } if path == "pi[0][1]"), "{err}");

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["carrier_size"] = serde_json::json!("two");
        let err = Certificate::from_json(&value.to_string()).unwrap_err();
        assert!(matches!(err, Error::Malformed { ref path, .. } if path == "carrier_size"), "{err}");

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["E"][1] = serde_json::json!("a");
        let err = Certificate::from_json(&value.to_string()).unwrap_err();
        assert!(matches!(err, Error::Malformed { ref path, .. } if path == "E[1]"), "{err}");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/10", "x").unwrap(), Rational::new(1, 10));
        assert_eq!(parse_rational("0", "x").unwrap(), Rational::from_integer(0));
        assert!(parse_rational("0.1", "x").is_err());
        assert!(parse_rational("1/0", "x").is_err());
    }
}
