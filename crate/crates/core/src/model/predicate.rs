use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// How many point arguments a predicate takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    /// Variadic set predicates (`coll`, `ncoll`, `cyclic`).
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

/// Which kind of constant a predicate carries in its extra slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSlot {
    None,
    Angle,
    Ratio,
    Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateKind {
    Coll,
    Ncoll,
    Para,
    Npara,
    Perp,
    Cong,
    Cyclic,
    Circle,
    Midp,
    Eqangle,
    Eqratio,
    Eqratio3,
    Sameside,
    Nsameside,
    Sameclock,
    Simtri,
    Simtrir,
    Contri,
    Contrir,
    Aconst,
    Rconst,
    Lconst,
    Acompute,
    Rcompute,
    Lcompute,
    PythagoreanPremises,
    PythagoreanConclusions,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 27] = [
        PredicateKind::Coll,
        PredicateKind::Ncoll,
        PredicateKind::Para,
        PredicateKind::Npara,
        PredicateKind::Perp,
        PredicateKind::Cong,
        PredicateKind::Cyclic,
        PredicateKind::Circle,
        PredicateKind::Midp,
        PredicateKind::Eqangle,
        PredicateKind::Eqratio,
        PredicateKind::Eqratio3,
        PredicateKind::Sameside,
        PredicateKind::Nsameside,
        PredicateKind::Sameclock,
        PredicateKind::Simtri,
        PredicateKind::Simtrir,
        PredicateKind::Contri,
        PredicateKind::Contrir,
        PredicateKind::Aconst,
        PredicateKind::Rconst,
        PredicateKind::Lconst,
        PredicateKind::Acompute,
        PredicateKind::Rcompute,
        PredicateKind::Lcompute,
        PredicateKind::PythagoreanPremises,
        PredicateKind::PythagoreanConclusions,
    ];

    pub fn tag(self) -> &'static str {
        use PredicateKind::*;
        match self {
            Coll => "coll",
            Ncoll => "ncoll",
            Para => "para",
            Npara => "npara",
            Perp => "perp",
            Cong => "cong",
            Cyclic => "cyclic",
            Circle => "circle",
            Midp => "midp",
            Eqangle => "eqangle",
            Eqratio => "eqratio",
            Eqratio3 => "eqratio3",
            Sameside => "sameside",
            Nsameside => "nsameside",
            Sameclock => "sameclock",
            Simtri => "simtri",
            Simtrir => "simtrir",
            Contri => "contri",
            Contrir => "contrir",
            Aconst => "aconst",
            Rconst => "rconst",
            Lconst => "lconst",
            Acompute => "acompute",
            Rcompute => "rcompute",
            Lcompute => "lcompute",
            PythagoreanPremises => "PythagoreanPremises",
            PythagoreanConclusions => "PythagoreanConclusions",
        }
    }

    pub fn arity(self) -> Arity {
        use PredicateKind::*;
        match self {
            Coll | Ncoll => Arity::AtLeast(3),
            Cyclic => Arity::AtLeast(4),
            Para | Npara | Perp | Cong | Circle | Aconst | Rconst | Acompute | Rcompute => {
                Arity::Exactly(4)
            }
            Midp | PythagoreanPremises | PythagoreanConclusions => Arity::Exactly(3),
            Eqangle | Eqratio => Arity::Exactly(8),
            Eqratio3 | Sameside | Nsameside | Sameclock | Simtri | Simtrir | Contri | Contrir => {
                Arity::Exactly(6)
            }
            Lconst | Lcompute => Arity::Exactly(2),
        }
    }

    pub fn constant_slot(self) -> ConstantSlot {
        match self {
            PredicateKind::Aconst => ConstantSlot::Angle,
            PredicateKind::Rconst => ConstantSlot::Ratio,
            PredicateKind::Lconst => ConstantSlot::Length,
            _ => ConstantSlot::None,
        }
    }

    /// Predicates decided only by the diagram; they never become rule conclusions.
    pub fn is_numeric_only(self) -> bool {
        matches!(
            self,
            PredicateKind::Ncoll
                | PredicateKind::Npara
                | PredicateKind::Sameside
                | PredicateKind::Nsameside
                | PredicateKind::Sameclock
        )
    }

    pub fn is_compute(self) -> bool {
        matches!(
            self,
            PredicateKind::Acompute | PredicateKind::Rcompute | PredicateKind::Lcompute
        )
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PredicateKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use PredicateKind::*;
        Ok(match s {
            "coll" => Coll,
            "ncoll" => Ncoll,
            "para" => Para,
            "npara" => Npara,
            "perp" => Perp,
            "cong" => Cong,
            "cyclic" => Cyclic,
            "circle" => Circle,
            "midp" => Midp,
            "eqangle" => Eqangle,
            "eqratio" => Eqratio,
            "eqratio3" => Eqratio3,
            "sameside" => Sameside,
            "nsameside" => Nsameside,
            "sameclock" | "same_clock" => Sameclock,
            "simtri" => Simtri,
            "simtrir" => Simtrir,
            "contri" => Contri,
            "contrir" => Contrir,
            "aconst" => Aconst,
            "rconst" => Rconst,
            "lconst" => Lconst,
            "acompute" => Acompute,
            "rcompute" => Rcompute,
            "lcompute" => Lcompute,
            "PythagoreanPremises" | "PythagorasPremises" | "pythagorean_premises" => {
                PythagoreanPremises
            }
            "PythagoreanConclusions" | "PythagorasConclusions" | "pythagorean_conclusions" => {
                PythagoreanConclusions
            }
            other => return Err(ModelError::UnknownPredicate(other.to_string())),
        })
    }
}
