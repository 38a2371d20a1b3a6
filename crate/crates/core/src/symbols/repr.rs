//! JSON wire form of [`SymbolSpec`]. Field names are mirrored in
//! `docs/schema/symbol.schema.json`.

use serde::{Deserialize, Serialize};

use super::{SymbolKind, SymbolSpec};
use crate::error::Error;
use crate::scalar::Real;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound = "T: Real")]
pub(crate) enum SymbolRepr<T> {
    Power {
        alpha: T,
        dimension: usize,
    },
    Quadratic {
        matrix: Vec<Vec<T>>,
    },
    Drift {
        velocity: Vec<T>,
    },
    Relativistic {
        mass: T,
        dimension: usize,
    },
    LogEuclid {
        dimension: usize,
    },
    BlockComponent {
        inner: Box<SymbolSpec<T>>,
        offset: usize,
        dimension: usize,
    },
    Combination {
        terms: Vec<TermRepr<T>>,
        dimension: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub(crate) struct TermRepr<T> {
    weight: T,
    symbol: SymbolSpec<T>,
}

impl<T: Real> TryFrom<SymbolRepr<T>> for SymbolSpec<T> {
    type Error = Error;

    fn try_from(repr: SymbolRepr<T>) -> Result<Self, Error> {
        match repr {
            SymbolRepr::Power { alpha, dimension } => SymbolSpec::power(alpha, dimension),
            SymbolRepr::Quadratic { matrix } => SymbolSpec::quadratic(matrix),
            SymbolRepr::Drift { velocity } => SymbolSpec::drift(velocity),
            SymbolRepr::Relativistic { mass, dimension } => {
                SymbolSpec::relativistic(mass, dimension)
            }
            SymbolRepr::LogEuclid { dimension } => SymbolSpec::log_euclid(dimension),
            SymbolRepr::BlockComponent {
                inner,
                offset,
                dimension,
            } => SymbolSpec::block(*inner, offset, dimension),
            SymbolRepr::Combination { terms, dimension } => SymbolSpec::combination(
                terms.into_iter().map(|t| (t.weight, t.symbol)).collect(),
                dimension,
            ),
        }
    }
}

impl<T: Real> From<SymbolSpec<T>> for SymbolRepr<T> {
    fn from(spec: SymbolSpec<T>) -> Self {
        let dimension = spec.dimension;
        match spec.kind {
            SymbolKind::Power { alpha } => SymbolRepr::Power { alpha, dimension },
            SymbolKind::Quadratic { matrix } => SymbolRepr::Quadratic { matrix },
            SymbolKind::Drift { velocity } => SymbolRepr::Drift { velocity },
            SymbolKind::Relativistic { mass } => SymbolRepr::Relativistic { mass, dimension },
            SymbolKind::LogEuclid => SymbolRepr::LogEuclid { dimension },
            SymbolKind::BlockComponent { inner, offset } => SymbolRepr::BlockComponent {
                inner,
                offset,
                dimension,
            },
            SymbolKind::Combination { terms } => SymbolRepr::Combination {
                terms: terms
                    .into_iter()
                    .map(|(weight, symbol)| TermRepr { weight, symbol })
                    .collect(),
                dimension,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{catalog, SymbolSpec};

    #[test]
    fn parses_documented_form() {
        let psi: SymbolSpec<f64> =
            serde_json::from_str(r#"{"kind":"power","alpha":2.0,"dimension":1}"#).unwrap();
        assert_eq!(psi, SymbolSpec::power(2.0, 1).unwrap());
        let comb: SymbolSpec<f64> = serde_json::from_str(
            r#"{"kind":"combination","dimension":1,
                "terms":[{"weight":0.5,"symbol":{"kind":"drift","velocity":[2.0]}}]}"#,
        )
        .unwrap();
        assert_eq!(comb.eval(&[1.0]).unwrap().im, 1.0);
    }

    #[test]
    fn rejects_unknown_fields_and_invalid_values() {
        assert!(serde_json::from_str::<SymbolSpec<f64>>(
            r#"{"kind":"power","alpha":2.0,"dimension":1,"extra":1}"#
        )
        .is_err());
        assert!(serde_json::from_str::<SymbolSpec<f64>>(
            r#"{"kind":"power","alpha":3.0,"dimension":1}"#
        )
        .is_err());
        assert!(serde_json::from_str::<SymbolSpec<f64>>(r#"{"kind":"mystery"}"#).is_err());
    }

    #[test]
    fn catalog_round_trips() {
        for (name, psi) in catalog::<f64>(2) {
            let json = serde_json::to_string(&psi).unwrap();
            let back: SymbolSpec<f64> = serde_json::from_str(&json).unwrap();
            assert_eq!(back, psi, "{name}: {json}");
        }
    }
}
