//! Named permutation maps used throughout the analyses.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm_map::PermMap;
use crate::tensor::{Gate, GateFlags};

#[derive(Clone, Debug, Serialize)]
pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    pub map: Option<PermMap>,
    pub claimed: GateFlags,
    /// Claimed Yang-Baxter property, where one is stated.
    pub yang_baxter: Option<bool>,
}

impl Builtin {
    pub fn gate(&self) -> Gate {
        self.map.as_ref().expect("all builtins are permutation maps").to_gate()
    }
}

const DU: GateFlags = GateFlags { unitary: true, dual_unitary: true, perfect: false };
const PERFECT: GateFlags = GateFlags { unitary: true, dual_unitary: true, perfect: true };

struct Entry {
    name: &'static str,
    aliases: &'static [&'static str],
    description: &'static str,
    cd: &'static str,
    claimed: GateFlags,
    yang_baxter: Option<bool>,
}

const TABLE: &[Entry] = &[
    Entry {
        name: "table1",
        aliases: &["tableI"],
        description: "N=3 broken orthogonal array: C row-Latin, D column-Latin",
        cd: "33 23 13 / 31 12 21 / 32 11 22",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "U1",
        aliases: &[],
        description: "N=2 interacting class representative",
        cd: "12 21 / 11 22",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "U2",
        aliases: &[],
        description: "N=2 interacting class representative",
        cd: "21 12 / 22 11",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "C1",
        aliases: &[],
        description: "N=3 ergodic example, mean orbit ~ 3^L",
        cd: "32 22 13 / 23 33 12 / 21 31 11",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "C2",
        aliases: &[],
        description: "N=3 ergodic example, mean orbit ~ 3^(L/2)",
        cd: "13 23 33 / 31 12 22 / 32 21 11",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "I1",
        aliases: &[],
        description: "N=3 integrable example, Yang-Baxter map",
        cd: "11 31 21 / 12 23 33 / 13 22 32",
        claimed: DU,
        yang_baxter: Some(true),
    },
    Entry {
        name: "I2",
        aliases: &[],
        description: "N=3 integrable example, controlled unitary, not Yang-Baxter",
        cd: "11 21 31 / 12 32 22 / 13 23 33",
        claimed: DU,
        yang_baxter: Some(false),
    },
    Entry {
        name: "E1",
        aliases: &[],
        description: "N=3, first gliders at range alpha=2",
        cd: "32 22 13 / 31 21 12 / 23 33 11",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "E2",
        aliases: &[],
        description: "N=3, first glider at range alpha=3",
        cd: "11 32 21 / 33 13 23 / 12 31 22",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "V1",
        aliases: &[],
        description: "N=5 linear perfect map (a+b, a-b), labels = element + 1",
        cd: "11 25 34 43 52 / 22 31 45 54 13 / 33 42 51 15 24 / 44 53 12 21 35 / 55 14 23 32 41",
        claimed: PERFECT,
        yang_baxter: None,
    },
    Entry {
        name: "V2",
        aliases: &[],
        description: "V1 dressed by the non-linear permutation (1,2,3,4,5) -> (1,5,3,2,4) on the first outgoing leg",
        cd: "11 55 34 23 42 / 52 31 25 44 13 / 33 22 41 15 54 / 24 43 12 51 35 / 45 14 53 32 21",
        claimed: PERFECT,
        yang_baxter: None,
    },
    Entry {
        name: "MOLS7",
        aliases: &["N7", "mols7"],
        description: "N=7 perfect map from a pair of orthogonal Latin squares, unrelated to linear maps",
        cd: "11 22 33 44 55 66 77 / 24 16 41 35 67 73 52 / 36 45 12 23 71 57 64 / \
             47 51 65 72 26 34 13 / 53 37 76 61 14 42 25 / 62 74 27 56 43 15 31 / \
             75 63 54 17 32 21 46",
        claimed: PERFECT,
        yang_baxter: None,
    },
    Entry {
        name: "Z4",
        aliases: &["z4"],
        description: "(2a+b, a+2b) over Z_4, labels with 0 written as 4; DU, not perfect",
        cd: "33 41 13 21 / 14 22 34 42 / 31 43 11 23 / 12 24 32 44",
        claimed: DU,
        yang_baxter: None,
    },
    Entry {
        name: "Z3",
        aliases: &["lin3", "z3"],
        description: "(a+b, a-b) over Z_3, labels = element + 1; perfect",
        cd: "11 23 32 / 22 31 13 / 33 12 21",
        claimed: PERFECT,
        yang_baxter: None,
    },
    Entry {
        name: "SWAP2",
        aliases: &[],
        description: "SWAP at N=2",
        cd: "11 21 / 12 22",
        claimed: DU,
        yang_baxter: Some(true),
    },
    Entry {
        name: "SWAP3",
        aliases: &[],
        description: "SWAP at N=3",
        cd: "11 21 31 / 12 22 32 / 13 23 33",
        claimed: DU,
        yang_baxter: Some(true),
    },
];

pub fn names() -> Vec<&'static str> {
    TABLE.iter().map(|e| e.name).collect()
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let e = TABLE
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name) || e.aliases.iter().any(|a| a.eq_ignore_ascii_case(name)))
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    Ok(Builtin {
        name: e.name,
        description: e.description,
        map: Some(PermMap::parse(e.cd).expect("builtin tables parse")),
        claimed: e.claimed,
        yang_baxter: e.yang_baxter,
    })
}

pub fn map(name: &str) -> Result<PermMap> {
    Ok(builtin(name)?.map.expect("permutation builtin"))
}

/// The six N=3 models whose glider counts are tabulated.
pub const GLIDER_MODELS: [&str; 6] = ["C1", "C2", "I1", "I2", "E1", "E2"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses() {
        for n in names() {
            builtin(n).unwrap();
        }
    }

    #[test]
    fn unknown_is_an_error() {
        assert!(matches!(builtin("nonexistent"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(map("lin3").unwrap(), map("Z3").unwrap());
    }
}
