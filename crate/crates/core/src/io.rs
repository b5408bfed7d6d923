//! JSON interchange: complex numbers as `[re, im]` pairs and the frame file
//! schema read and written by the command-line tool.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::erasure::{weights_from_probabilities, ProbabilityModel};
use crate::error::{FrameError, Result};
use crate::frame::Frame;
use crate::linalg::C64;

pub type ComplexPair = [f64; 2];

pub fn to_pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

pub fn from_pair(p: ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

pub fn vectors_to_pairs(f: &Frame) -> Vec<Vec<ComplexPair>> {
    f.vectors()
        .into_iter()
        .map(|v| v.into_iter().map(to_pair).collect())
        .collect()
}

pub fn pairs_to_frame(vectors: &[Vec<ComplexPair>]) -> Result<Frame> {
    let complex: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| v.iter().copied().map(from_pair).collect())
        .collect();
    Frame::new(&complex)
}

pub fn serialize_frame<S: Serializer>(f: &Frame, s: S) -> std::result::Result<S::Ok, S::Error> {
    vectors_to_pairs(f).serialize(s)
}

pub fn deserialize_frame<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Frame, D::Error> {
    let raw = Vec::<Vec<ComplexPair>>::deserialize(d)?;
    pairs_to_frame(&raw).map_err(serde::de::Error::custom)
}

/// `serde(with)` adapter for `Vec<C64>` as a list of pairs.
pub mod complex_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().copied().map(to_pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        Ok(Vec::<ComplexPair>::deserialize(d)?.into_iter().map(from_pair).collect())
    }
}

/// `{"dimension": n, "vectors": [...], "probabilities": [...], "dual": [...]?}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub dimension: usize,
    pub vectors: Vec<Vec<ComplexPair>>,
    pub probabilities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<Vec<ComplexPair>>>,
}

/// A validated frame file.
#[derive(Debug, Clone)]
pub struct Problem {
    pub frame: Frame,
    pub model: ProbabilityModel,
    pub dual: Option<Frame>,
}

impl FrameFile {
    pub fn from_frame(f: &Frame, probabilities: &[f64], dual: Option<&Frame>) -> Self {
        Self {
            dimension: f.dimension(),
            vectors: vectors_to_pairs(f),
            probabilities: probabilities.to_vec(),
            dual: dual.map(vectors_to_pairs),
        }
    }

    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Checks the shape invariants. Violations are schema errors.
    pub fn check_shape(&self) -> std::result::Result<(), String> {
        if self.vectors.is_empty() {
            return Err("`vectors` is empty".into());
        }
        if self.vectors.len() != self.probabilities.len() {
            return Err(format!(
                "{} vectors but {} probabilities",
                self.vectors.len(),
                self.probabilities.len()
            ));
        }
        let check = |name: &str, list: &[Vec<ComplexPair>]| {
            match list.iter().position(|v| v.len() != self.dimension) {
                Some(i) => Err(format!("{name}[{i}] has length {}, expected {}", list[i].len(), self.dimension)),
                None => Ok(()),
            }
        };
        check("vectors", &self.vectors)?;
        if let Some(dual) = &self.dual {
            if dual.len() != self.vectors.len() {
                return Err(format!("`dual` has {} vectors, expected {}", dual.len(), self.vectors.len()));
            }
            check("dual", dual)?;
        }
        Ok(())
    }

    /// Builds the frame, weights and optional dual. Shape problems are
    /// reported as [`FrameError::DimensionMismatch`].
    pub fn into_problem(&self) -> Result<Problem> {
        self.check_shape().map_err(FrameError::DimensionMismatch)?;
        let frame = pairs_to_frame(&self.vectors)?;
        let model = weights_from_probabilities(&self.probabilities, self.dimension)?;
        let dual = self.dual.as_deref().map(pairs_to_frame).transpose()?;
        Ok(Problem { frame, model, dual })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("frame files always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_bits() {
        let f = Frame::new(&[vec![C64::new(0.1, 1.0 / 3.0), C64::new(2.0f64.sqrt(), -0.0)]]).unwrap();
        let file = FrameFile::from_frame(&f, &[1.0], None);
        let back = FrameFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert_eq!(pairs_to_frame(&back.vectors).unwrap(), f);
    }

    #[test]
    fn shape_errors() {
        let bad = r#"{"dimension":2,"vectors":[[[1,0],[0,0]],[[0,0]]],"probabilities":[0.5,0.5]}"#;
        let file = FrameFile::parse(bad).unwrap();
        assert!(file.check_shape().unwrap_err().contains("vectors[1]"));

        let counts = r#"{"dimension":1,"vectors":[[[1,0]]],"probabilities":[0.5,0.5]}"#;
        assert!(FrameFile::parse(counts).unwrap().check_shape().is_err());

        assert!(FrameFile::parse(r#"{"dimension":1,"vectors":[],"probabilities":[],"extra":1}"#).is_err());
    }

    #[test]
    fn dual_key_is_optional() {
        let text = r#"{"dimension":1,"vectors":[[[1,0]],[[1,0]]],"probabilities":[0.5,0.5],"dual":[[[0.5,0]],[[0.5,0]]]}"#;
        let problem = FrameFile::parse(text).unwrap().into_problem().unwrap();
        assert_eq!(problem.dual.unwrap().len(), 2);
        assert_eq!(problem.model.q, vec![2.0, 2.0]);
    }
}
