//! Secretary instances and their JSON form.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::matroid::{ConcreteMatroid, MatroidDesc};
use crate::offline::Intersection;
use crate::scalar::{validate_weights, ExactValue, Weight};
use crate::submodular::{SubmodularDesc, SubmodularFunction};

/// `k` matroids over `0..n`, element weights, and optionally a submodular
/// objective that replaces the linear one.
///
/// ```json
/// {"weights": [3, 1, "5/2"],
///  "matroids": [{"type": "uniform", "n": 3, "rank": 2}]}
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct SecretaryInstance<W> {
    pub weights: Vec<W>,
    pub matroids: Vec<MatroidDesc>,
    pub objective: Option<SubmodularDesc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    weights: Vec<ExactValue>,
    matroids: Vec<MatroidDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objective: Option<SubmodularDesc>,
}

impl<W: Weight> SecretaryInstance<W> {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn k(&self) -> usize {
        self.matroids.len()
    }

    /// Checks weights, that every matroid has `n` elements and that the
    /// objective (if any) does too.
    pub fn validate(&self) -> Result<()> {
        validate_weights(&self.weights)?;
        self.constraint()?;
        if let Some(f) = self.objective()? {
            if f.ground_size() != self.n() {
                return Err(invalid(format!(
                    "objective covers {} elements, instance has {}",
                    f.ground_size(),
                    self.n()
                )));
            }
        }
        Ok(())
    }

    pub fn constraint(&self) -> Result<Intersection> {
        if self.matroids.is_empty() {
            return Err(invalid("an instance needs at least one matroid"));
        }
        let oracles = self.matroids.iter().map(MatroidDesc::build).collect::<Result<Vec<_>>>()?;
        if let Some(m) = oracles.iter().find(|m| m.ground_size() != self.n()) {
            return Err(invalid(format!(
                "a matroid has {} elements but there are {} weights",
                m.ground_size(),
                self.n()
            )));
        }
        Intersection::new(oracles)
    }

    /// Matroid `j` as a concrete family, if it is one.
    pub fn concrete(&self, j: usize) -> Result<ConcreteMatroid> {
        let desc = &self.matroids[j];
        desc.concrete().unwrap_or_else(|| {
            Err(invalid(format!("matroid {j} is a derived {} matroid", desc.family())))
        })
    }

    pub fn objective(&self) -> Result<Option<SubmodularFunction<W>>> {
        self.objective.as_ref().map(SubmodularDesc::build).transpose()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let instance: Self = serde_json::from_str(text)?;
        instance.validate()?;
        Ok(instance)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// The same instance with weights in another scalar type.
    pub fn convert<V: Weight>(&self) -> Result<SecretaryInstance<V>> {
        Ok(SecretaryInstance {
            weights: self
                .weights
                .iter()
                .map(|w| w.to_exact().and_then(|q| V::from_exact(&q)))
                .collect::<Result<_>>()?,
            matroids: self.matroids.clone(),
            objective: self.objective.clone(),
        })
    }
}

impl<W: Weight> Serialize for SecretaryInstance<W> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let weights = self
            .weights
            .iter()
            .map(|w| w.to_exact().map(ExactValue))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::ser::Error::custom)?;
        InstanceFile { weights, matroids: self.matroids.clone(), objective: self.objective.clone() }
            .serialize(serializer)
    }
}

impl<'de, W: Weight> Deserialize<'de> for SecretaryInstance<W> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = InstanceFile::deserialize(deserializer)?;
        let weights = file
            .weights
            .iter()
            .map(|v| W::from_exact(&v.0))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SecretaryInstance { weights, matroids: file.matroids, objective: file.objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    const TEXT: &str = r#"{"weights": [3, 1, "5/2"],
        "matroids": [{"type": "uniform", "n": 3, "rank": 2},
                     {"type": "partition", "blocks": [[0, 1], [2]]}]}"#;

    #[test]
    fn reads_and_writes() {
        let inst = SecretaryInstance::<Rational>::from_json(TEXT).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.k(), 2);
        assert_eq!(inst.weights[2], Rational::new(5.into(), 2.into()));
        let again = SecretaryInstance::<Rational>::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(again, inst);
        assert!(SecretaryInstance::<i64>::from_json(TEXT).is_err(), "5/2 is not an integer");
        let floats: SecretaryInstance<f64> = inst.convert().unwrap();
        assert_eq!(floats.weights, vec![3.0, 1.0, 2.5]);
    }

    #[test]
    fn rejects_inconsistent_instances() {
        let short = r#"{"weights": [1, 2], "matroids": [{"type": "uniform", "n": 3, "rank": 1}]}"#;
        assert!(SecretaryInstance::<i64>::from_json(short).is_err());
        let negative = r#"{"weights": [-1], "matroids": [{"type": "uniform", "n": 1, "rank": 1}]}"#;
        assert!(SecretaryInstance::<i64>::from_json(negative).is_err());
        let none = r#"{"weights": [1], "matroids": []}"#;
        assert!(SecretaryInstance::<i64>::from_json(none).is_err());
        let extra = r#"{"weights": [1], "matroids": [], "colour": 1}"#;
        assert!(SecretaryInstance::<i64>::from_json(extra).is_err());
    }
}
