use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::decomp::Family;
use crate::error::{Error, Result};
use crate::math::PI;
use crate::qgates::GateKind;

#[derive(Debug, Clone, PartialEq)]
pub enum Members {
    Discrete(Vec<GateKind>),
    Continuous(Family),
}

/// A named collection of two-qubit gate types exposed to the compiler.
#[derive(Debug, Clone, PartialEq)]
pub struct InstructionSet {
    pub name: String,
    pub members: Members,
}

impl InstructionSet {
    pub fn discrete(name: impl Into<String>, gates: Vec<GateKind>) -> Self {
        InstructionSet {
            name: name.into(),
            members: Members::Discrete(gates),
        }
    }

    /// Number of gate types, `None` for a continuous family.
    pub fn num_types(&self) -> Option<usize> {
        match &self.members {
            Members::Discrete(g) => Some(g.len()),
            Members::Continuous(_) => None,
        }
    }

    pub fn contains(&self, gate: &GateKind) -> bool {
        match &self.members {
            Members::Discrete(g) => g.iter().any(|m| m.same_gate(gate)),
            Members::Continuous(Family::FullFSim) => !gate.is_swap(),
            Members::Continuous(Family::FullXy) => !gate.is_swap() && gate.fsim_params().1 == 0.0,
        }
    }
}

const NAMES: [&str; 21] = [
    "S1", "S2", "S3", "S4", "S5", "S6", "S7", "G1", "G2", "G3", "G4", "G5", "G6", "G7", "R1", "R2",
    "R3", "R4", "R5", "FullXY", "FullFSim",
];

pub fn instruction_set_names() -> &'static [&'static str] {
    &NAMES
}

fn single(i: usize) -> GateKind {
    match i {
        1 => GateKind::Syc,
        2 => GateKind::SqrtIswap,
        3 => GateKind::Cz,
        4 => GateKind::Iswap,
        5 => GateKind::FSim {
            theta: PI / 3.0,
            phi: 0.0,
        },
        6 => GateKind::FSim {
            theta: 3.0 * PI / 8.0,
            phi: 0.0,
        },
        7 => GateKind::FSim {
            theta: PI / 6.0,
            phi: PI,
        },
        _ => unreachable!("single-type sets are S1..S7"),
    }
}

/// Looks up a registry entry by name (case-insensitive).
pub fn instruction_set(name: &str) -> Result<InstructionSet> {
    let canonical = NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::NotFound(format!("instruction set {name:?}")))?;
    let (kind, idx) = canonical.split_at(1);
    let members = match (kind, idx.parse::<usize>()) {
        ("S", Ok(i)) => Members::Discrete(alloc::vec![single(i)]),
        ("G", Ok(i)) => {
            // G1 = {S1, S2}, each further G adds the next S; G7 adds SWAP.
            let mut g: Vec<GateKind> = (1..=(i + 1).min(7)).map(single).collect();
            if i == 7 {
                g.push(GateKind::Swap);
            }
            Members::Discrete(g)
        }
        ("R", Ok(i)) => {
            // R1 = {S3, S4}, R2 adds S2, R3 S5, R4 S6, R5 SWAP.
            let order = [3, 4, 2, 5, 6];
            let mut ids: Vec<usize> = order[..(i + 1).min(5)].to_vec();
            ids.sort_unstable();
            let mut g: Vec<GateKind> = ids.into_iter().map(single).collect();
            if i == 5 {
                g.push(GateKind::Swap);
            }
            Members::Discrete(g)
        }
        _ if *canonical == "FullXY" => Members::Continuous(Family::FullXy),
        _ => Members::Continuous(Family::FullFSim),
    };
    Ok(InstructionSet {
        name: canonical.to_string(),
        members,
    })
}
