//! JSON wire form of [`TimeFamily`]. Field names are mirrored in
//! `docs/schema/family.schema.json`.

use serde::{Deserialize, Serialize};

use super::{Coupling, FamilyKind, TimeFamily};
use crate::error::Error;
use crate::scalar::Real;
use crate::symbols::SymbolSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
#[serde(bound = "T: Real")]
pub(crate) enum FamilyRepr<T> {
    Separable {
        symbols: Vec<SymbolSpec<T>>,
    },
    Monomial {
        exponents: Vec<u32>,
        symbol: SymbolSpec<T>,
    },
    Interaction {
        psi1: SymbolSpec<T>,
        psi2: SymbolSpec<T>,
        psi3: SymbolSpec<T>,
        coupling: Coupling,
    },
}

impl<T: Real> TryFrom<FamilyRepr<T>> for TimeFamily<T> {
    type Error = Error;

    fn try_from(repr: FamilyRepr<T>) -> Result<Self, Error> {
        TimeFamily::new(match repr {
            FamilyRepr::Separable { symbols } => FamilyKind::Separable { symbols },
            FamilyRepr::Monomial { exponents, symbol } => FamilyKind::Monomial { exponents, symbol },
            FamilyRepr::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            } => FamilyKind::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            },
        })
    }
}

impl<T: Real> From<TimeFamily<T>> for FamilyRepr<T> {
    fn from(f: TimeFamily<T>) -> Self {
        match f.kind {
            FamilyKind::Separable { symbols } => FamilyRepr::Separable { symbols },
            FamilyKind::Monomial { exponents, symbol } => FamilyRepr::Monomial { exponents, symbol },
            FamilyKind::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            } => FamilyRepr::Interaction {
                psi1,
                psi2,
                psi3,
                coupling,
            },
        }
    }
}
