//! JSON matroid descriptions.
//!
//! ```json
//! {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
//! {"type": "partition", "blocks": [[0, 1], [2]], "caps": [1, 1]}
//! {"type": "dual", "base": {"type": "uniform", "n": 4, "rank": 1}}
//! ```
//!
//! Matrix entries are exact: JSON integers or strings such as `"-3/2"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    DirectSum, Dual, GraphicMatroid, LaminarMatroid, LinearMatroid, Matroid, PartitionMatroid,
    Restriction, TransversalMatroid, UniformMatroid,
};
use crate::error::Result;
use crate::scalar::{ExactValue, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaminarSetDesc {
    pub elements: Vec<usize>,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MatroidDesc {
    Uniform {
        n: usize,
        rank: usize,
    },
    Partition {
        blocks: Vec<Vec<usize>>,
        /// Defaults to all ones (a simple partition matroid).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        caps: Option<Vec<usize>>,
    },
    Laminar {
        n: usize,
        sets: Vec<LaminarSetDesc>,
    },
    Graphic {
        vertices: usize,
        edges: Vec<[usize; 2]>,
    },
    Transversal {
        right: usize,
        adjacency: Vec<Vec<usize>>,
    },
    Linear {
        /// Row-major; one column per element.
        rows: Vec<Vec<ExactValue>>,
    },
    Dual {
        base: Box<MatroidDesc>,
    },
    Restriction {
        base: Box<MatroidDesc>,
        subset: Vec<usize>,
    },
    DirectSum {
        parts: Vec<MatroidDesc>,
    },
}

/// The concrete families, kept as typed values so that algorithms needing
/// structure beyond the oracle (blocks, endpoints, nonzero rows, adjacency)
/// can get at it.
#[derive(Clone, Debug)]
pub enum ConcreteMatroid {
    Uniform(UniformMatroid),
    Partition(PartitionMatroid),
    Laminar(LaminarMatroid),
    Graphic(GraphicMatroid),
    Transversal(TransversalMatroid),
    Linear(LinearMatroid<Rational>),
}

impl ConcreteMatroid {
    pub fn into_oracle(self) -> Arc<dyn Matroid> {
        match self {
            ConcreteMatroid::Uniform(m) => Arc::new(m),
            ConcreteMatroid::Partition(m) => Arc::new(m),
            ConcreteMatroid::Laminar(m) => Arc::new(m),
            ConcreteMatroid::Graphic(m) => Arc::new(m),
            ConcreteMatroid::Transversal(m) => Arc::new(m),
            ConcreteMatroid::Linear(m) => Arc::new(m),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ConcreteMatroid::Uniform(_) => "uniform",
            ConcreteMatroid::Partition(_) => "partition",
            ConcreteMatroid::Laminar(_) => "laminar",
            ConcreteMatroid::Graphic(_) => "graphic",
            ConcreteMatroid::Transversal(_) => "transversal",
            ConcreteMatroid::Linear(_) => "linear",
        }
    }
}

impl MatroidDesc {
    pub fn family(&self) -> &'static str {
        match self {
            MatroidDesc::Uniform { .. } => "uniform",
            MatroidDesc::Partition { .. } => "partition",
            MatroidDesc::Laminar { .. } => "laminar",
            MatroidDesc::Graphic { .. } => "graphic",
            MatroidDesc::Transversal { .. } => "transversal",
            MatroidDesc::Linear { .. } => "linear",
            MatroidDesc::Dual { .. } => "dual",
            MatroidDesc::Restriction { .. } => "restriction",
            MatroidDesc::DirectSum { .. } => "direct_sum",
        }
    }

    /// The typed matroid for concrete families; `None` for derived ones.
    pub fn concrete(&self) -> Option<Result<ConcreteMatroid>> {
        let built = match self {
            MatroidDesc::Uniform { n, rank } => {
                Ok(ConcreteMatroid::Uniform(UniformMatroid::new(*n, *rank)))
            }
            MatroidDesc::Partition { blocks, caps } => {
                let caps = caps.clone().unwrap_or_else(|| vec![1; blocks.len()]);
                PartitionMatroid::new(blocks.clone(), caps).map(ConcreteMatroid::Partition)
            }
            MatroidDesc::Laminar { n, sets } => LaminarMatroid::new(
                *n,
                sets.iter().map(|s| (s.elements.clone(), s.cap)).collect(),
            )
            .map(ConcreteMatroid::Laminar),
            MatroidDesc::Graphic { vertices, edges } => {
                GraphicMatroid::new(*vertices, edges.iter().map(|&[u, v]| (u, v)).collect())
                    .map(ConcreteMatroid::Graphic)
            }
            MatroidDesc::Transversal { right, adjacency } => {
                TransversalMatroid::new(*right, adjacency.clone()).map(ConcreteMatroid::Transversal)
            }
            MatroidDesc::Linear { rows } => LinearMatroid::from_rows(
                rows.iter()
                    .map(|row| row.iter().map(|x| x.0.clone()).collect())
                    .collect(),
            )
            .map(ConcreteMatroid::Linear),
            MatroidDesc::Dual { .. }
            | MatroidDesc::Restriction { .. }
            | MatroidDesc::DirectSum { .. } => return None,
        };
        Some(built)
    }

    pub fn build(&self) -> Result<Arc<dyn Matroid>> {
        if let Some(concrete) = self.concrete() {
            return concrete.map(ConcreteMatroid::into_oracle);
        }
        Ok(match self {
            MatroidDesc::Dual { base } => Arc::new(Dual::new(base.build()?)),
            MatroidDesc::Restriction { base, subset } => {
                Arc::new(Restriction::new(base.build()?, subset.clone())?)
            }
            MatroidDesc::DirectSum { parts } => Arc::new(DirectSum::new(
                parts.iter().map(MatroidDesc::build).collect::<Result<_>>()?,
            )),
            _ => unreachable!("concrete families handled above"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        let text = r#"[
            {"type": "uniform", "n": 4, "rank": 2},
            {"type": "partition", "blocks": [[0, 1], [2]]},
            {"type": "partition", "blocks": [[0, 1, 2]], "caps": [2]},
            {"type": "laminar", "n": 3, "sets": [{"elements": [0, 1, 2], "cap": 2}, {"elements": [0], "cap": 0}]},
            {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]},
            {"type": "transversal", "right": 2, "adjacency": [[0], [0, 1], []]},
            {"type": "linear", "rows": [[1, 0, "1/2"], [0, 1, "-3/4"]]},
            {"type": "dual", "base": {"type": "uniform", "n": 3, "rank": 1}},
            {"type": "restriction", "base": {"type": "uniform", "n": 5, "rank": 2}, "subset": [4, 1]},
            {"type": "direct_sum", "parts": [{"type": "uniform", "n": 2, "rank": 1}, {"type": "uniform", "n": 1, "rank": 1}]}
        ]"#;
        let descs: Vec<MatroidDesc> = serde_json::from_str(text).unwrap();
        let sizes: Vec<usize> = descs.iter().map(|d| d.build().unwrap().ground_size()).collect();
        assert_eq!(sizes, vec![4, 3, 3, 3, 3, 3, 3, 3, 2, 3]);
        let dual = descs[7].build().unwrap();
        assert_eq!(dual.rank(&[0, 1, 2]).unwrap(), 2);
        assert!(descs[7].concrete().is_none());
        let lin = descs[6].build().unwrap();
        assert!(!lin.is_independent(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn round_trips() {
        let d = MatroidDesc::Linear {
            rows: vec![vec![ExactValue::from(1), ExactValue(Rational::new(1.into(), 3.into()))]],
        };
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"type":"linear","rows":[[1,"1/3"]]}"#);
        assert_eq!(serde_json::from_str::<MatroidDesc>(&text).unwrap(), d);
    }

    #[test]
    fn invalid_descriptions_error() {
        let bad: MatroidDesc =
            serde_json::from_str(r#"{"type": "graphic", "vertices": 1, "edges": [[0, 1]]}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<MatroidDesc>(r#"{"type": "vector"}"#).is_err());
    }
}
