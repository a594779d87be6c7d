//! Placement of MZI blocks into Clements and Reck meshes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{Block, BlockRole, NetworkProgram, Step};
use crate::gates::realize;
use crate::linalg::{std_gates, MziSetting};
use crate::numfmt::round_sig;

/// Universal mesh layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Rectangular: `m` layers of alternating even and odd slots.
    #[default]
    Clements,
    /// Triangular: `m(m−1)/2` slots on `2m−3` diagonals.
    Reck,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Clements => "clements",
            Scheme::Reck => "reck",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "clements" => Ok(Scheme::Clements),
            "reck" => Ok(Scheme::Reck),
            _ => Err(Error::Parse(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Position of one MZI in a mesh: column and upper mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Slot {
    pub layer: usize,
    pub top: usize,
}

/// Every slot of the scheme on `m` modes, sorted by layer then mode.
pub fn slot_grid(scheme: Scheme, m: usize) -> Vec<Slot> {
    let mut slots = Vec::new();
    if m < 2 {
        return slots;
    }
    match scheme {
        Scheme::Clements => {
            for layer in 0..m {
                slots.extend((layer % 2..m - 1).step_by(2).map(|top| Slot { layer, top }));
            }
        }
        Scheme::Reck => {
            // diagonal k starts at column 2k on the lowest pair and climbs one mode per column
            for k in 0..m - 1 {
                for j in 0..m - 1 - k {
                    slots.push(Slot { layer: 2 * k + j, top: m - 2 - j });
                }
            }
        }
    }
    slots.sort();
    slots
}

fn layer_count(scheme: Scheme, m: usize) -> usize {
    match scheme {
        Scheme::Clements => m,
        Scheme::Reck => (2 * m).saturating_sub(3),
    }
}

/// One mesh slot in the phase table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseRecord {
    pub slot: Slot,
    pub setting: MziSetting,
    pub role: BlockRole,
    /// Index of the program block placed here, `None` for identity slots.
    pub block: Option<usize>,
}

/// Truncation marker positioned between mesh layers.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationRecord {
    /// Last layer that must run before the truncation; `None` means before layer 0.
    pub after_layer: Option<usize>,
    pub modes: Vec<usize>,
}

/// A program laid out on a concrete mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshAssignment {
    pub scheme: Scheme,
    pub mode_count: usize,
    /// Slot index of each program block, in program order.
    pub placement: Vec<usize>,
    /// One record per grid slot, in grid order.
    pub phase_table: Vec<PhaseRecord>,
    pub truncations: Vec<TruncationRecord>,
}

impl MeshAssignment {
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.phase_table.iter().map(|r| r.slot)
    }

    pub fn layer_count(&self) -> usize {
        layer_count(self.scheme, self.mode_count)
    }

    pub fn used_slots(&self) -> usize {
        self.placement.len()
    }

    /// Number of layers up to the last occupied one.
    pub fn depth(&self) -> usize {
        self.placement.iter().map(|&i| self.phase_table[i].slot.layer + 1).max().unwrap_or(0)
    }

    /// Rebuilds a program from the phase table: every slot (identities
    /// included) layer by layer, with truncations after their layer.
    pub fn to_program(&self) -> Result<NetworkProgram> {
        let mut p = NetworkProgram::new(self.mode_count);
        for t in self.truncations.iter().filter(|t| t.after_layer.is_none()) {
            p.push_truncation(t.modes.clone())?;
        }
        for layer in 0..self.layer_count() {
            for r in self.phase_table.iter().filter(|r| r.slot.layer == layer) {
                p.push_block(Block::new(r.slot.top, r.setting, r.role))?;
            }
            for t in self.truncations.iter().filter(|t| t.after_layer == Some(layer)) {
                p.push_truncation(t.modes.clone())?;
            }
        }
        Ok(p)
    }

    /// Phase-table document with numbers rounded to 15 significant digits.
    pub fn to_json(&self) -> Value {
        let slots: Vec<Value> = self
            .phase_table
            .iter()
            .map(|r| {
                let s = r.setting;
                let mut v = json!({
                    "layer": r.slot.layer,
                    "top_mode": r.slot.top,
                    "theta1": round_sig(s.theta1),
                    "theta2": round_sig(s.theta2),
                    "phi1": round_sig(s.phi1),
                    "phi2": round_sig(s.phi2),
                    "role": r.role.symbol(),
                });
                if let Some((p3, p4)) = s.output {
                    v["phi3"] = json!(round_sig(p3));
                    v["phi4"] = json!(round_sig(p4));
                }
                v
            })
            .collect();
        let truncations: Vec<Value> =
            self.truncations.iter().map(|t| json!({"after_layer": t.after_layer, "modes": t.modes})).collect();
        json!({
            "scheme": self.scheme.to_string(),
            "modes": self.mode_count,
            "layers": self.layer_count(),
            "slots_total": self.phase_table.len(),
            "slots_used": self.used_slots(),
            "depth": self.depth(),
            "slots": slots,
            "truncations": truncations,
        })
    }
}

fn identity_setting() -> MziSetting {
    realize(&std_gates::identity()).expect("identity is an MZI")
}

/// Packs the program's blocks into the scheme's grid, each at the earliest
/// layer allowed by the blocks before it on the same modes.
///
/// A truncation only constrains the modes it removes: later blocks on those
/// modes start after it, everything else commutes with the projector.
pub fn place_in_mesh(program: &NetworkProgram, scheme: Scheme, m: usize) -> Result<MeshAssignment> {
    if program.mode_count() != m {
        return Err(Error::DimensionMismatch { expected: m, found: program.mode_count() });
    }
    let grid = slot_grid(scheme, m);
    let index_of = |s: Slot| grid.binary_search(&s).ok();
    let layers = layer_count(scheme, m);
    let mut ready = vec![0usize; m];
    let mut taken = vec![false; grid.len()];
    let mut placement = Vec::new();
    let mut blocks = Vec::new();
    let mut truncations = Vec::new();
    for (i, step) in program.steps().iter().enumerate() {
        match step {
            Step::Block(b) => {
                let earliest = ready[b.top].max(ready[b.top + 1]);
                let slot = (earliest..layers)
                    .filter_map(|layer| index_of(Slot { layer, top: b.top }))
                    .find(|&s| !taken[s])
                    .ok_or_else(|| Error::PlacementOverflow {
                        scheme: scheme.to_string(),
                        modes: m,
                        top: b.top,
                        bottom: b.top + 1,
                    })?;
                taken[slot] = true;
                ready[b.top] = grid[slot].layer + 1;
                ready[b.top + 1] = grid[slot].layer + 1;
                placement.push(slot);
                blocks.push(*b);
            }
            Step::TruncateAux(modes) => {
                let barrier = modes.iter().map(|&q| ready[q]).max().unwrap_or(0);
                for &q in modes {
                    ready[q] = barrier;
                }
                truncations.push(TruncationRecord { after_layer: barrier.checked_sub(1), modes: modes.clone() });
            }
            Step::Linear(_) => return Err(Error::NonBlockStep(i)),
        }
    }
    let identity = identity_setting();
    let mut phase_table: Vec<PhaseRecord> = grid
        .iter()
        .map(|&slot| PhaseRecord { slot, setting: identity, role: BlockRole::Identity, block: None })
        .collect();
    for (k, (&slot, b)) in placement.iter().zip(&blocks).enumerate() {
        phase_table[slot] = PhaseRecord { slot: grid[slot], setting: b.setting, role: b.role, block: Some(k) };
    }
    Ok(MeshAssignment { scheme, mode_count: m, placement, phase_table, truncations })
}

/// Counts the rigid shifts `(Δlayer, Δmode)` at which a layered template
/// fits the scheme's grid.
///
/// `pattern[k]` lists the upper modes of the blocks in the template's layer
/// `k`. A shift is valid when every shifted block lands on a grid slot.
pub fn enumerate_placements(pattern: &[Vec<usize>], scheme: Scheme, m: usize) -> usize {
    let grid: BTreeSet<Slot> = slot_grid(scheme, m).into_iter().collect();
    let cells: Vec<(usize, usize)> =
        pattern.iter().enumerate().flat_map(|(l, tops)| tops.iter().map(move |&t| (l, t))).collect();
    if cells.is_empty() {
        return 0;
    }
    let layers = layer_count(scheme, m) as isize;
    let modes = m as isize;
    let mut count = 0;
    for dl in 0..layers {
        for dm in -modes..modes {
            let fits = cells.iter().all(|&(l, t)| {
                let top = t as isize + dm;
                top >= 0 && grid.contains(&Slot { layer: l + dl as usize, top: top as usize })
            });
            if fits {
                count += 1;
            }
        }
    }
    count
}

/// The non-regular CZ: one layer of three MZIs on modes (0,1), (2,3), (4,5).
pub fn nonregular_cz_template() -> Vec<Vec<usize>> {
    vec![vec![0, 2, 4]]
}

/// The compressed regular CZ: `X`, then three `R₁/₃` blocks, then `X`.
pub fn compressed_cz_template() -> Vec<Vec<usize>> {
    vec![vec![3], vec![0, 2, 4], vec![3]]
}
