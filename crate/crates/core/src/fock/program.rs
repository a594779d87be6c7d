use std::fmt;

use serde::{Deserialize, Serialize};

use super::{apply_linear, truncate_aux, PhotonicState};
use crate::error::{Error, Result};
use crate::linalg::{creation_from_device, embed_block, ComplexMatrix, MziSetting};

/// What a single MZI block implements, as reported in phase tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockRole {
    #[serde(rename = "ID")]
    Identity,
    H,
    X,
    Y,
    Z,
    T,
    #[serde(rename = "RX")]
    Rx,
    #[serde(rename = "RY")]
    Ry,
    #[serde(rename = "RZ")]
    Rz,
    R13,
    #[serde(rename = "R13p")]
    R13Prime,
    #[serde(rename = "R13d")]
    R13Dagger,
}

impl BlockRole {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Identity => "ID",
            Self::H => "H",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::T => "T",
            Self::Rx => "RX",
            Self::Ry => "RY",
            Self::Rz => "RZ",
            Self::R13 => "R13",
            Self::R13Prime => "R13p",
            Self::R13Dagger => "R13d",
        }
    }
}

impl fmt::Display for BlockRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An MZI acting on modes `(top, top + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub top: usize,
    pub setting: MziSetting,
    pub role: BlockRole,
}

impl Block {
    pub fn new(top: usize, setting: MziSetting, role: BlockRole) -> Self {
        Self { top, setting, role }
    }

    /// 2x2 creation-operator transform of the device.
    pub fn creation_matrix(&self) -> ComplexMatrix {
        creation_from_device(&self.setting.matrix())
    }

    /// The block's creation transform on `m` modes.
    pub fn embedded(&self, m: usize) -> Result<ComplexMatrix> {
        embed_block(&self.creation_matrix(), self.top, m)
    }

    pub fn modes(&self) -> [usize; 2] {
        [self.top, self.top + 1]
    }
}

/// One step of a network program.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// Full `m × m` creation-operator transform.
    Linear(ComplexMatrix),
    /// A single MZI, kept as such so it can be placed on a mesh.
    Block(Block),
    /// Discard every term with a photon in one of these modes.
    TruncateAux(Vec<usize>),
}

impl Step {
    /// Creation-operator matrix of a linear step, `None` for truncations.
    pub fn matrix(&self, m: usize) -> Result<Option<ComplexMatrix>> {
        match self {
            Step::Linear(t) => Ok(Some(t.clone())),
            Step::Block(b) => b.embedded(m).map(Some),
            Step::TruncateAux(_) => Ok(None),
        }
    }
}

/// Ordered list of linear layers and truncation markers on `mode_count` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkProgram {
    mode_count: usize,
    steps: Vec<Step>,
}

impl NetworkProgram {
    pub fn new(mode_count: usize) -> Self {
        Self { mode_count, steps: Vec::new() }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, step: Step) -> Result<()> {
        self.validate_step(&step)?;
        self.steps.push(step);
        Ok(())
    }

    pub fn push_block(&mut self, block: Block) -> Result<()> {
        self.push(Step::Block(block))
    }

    pub fn push_truncation(&mut self, modes: Vec<usize>) -> Result<()> {
        self.push(Step::TruncateAux(modes))
    }

    /// Appends every step of `other`.
    pub fn extend(&mut self, other: &NetworkProgram) -> Result<()> {
        if other.mode_count != self.mode_count {
            return Err(Error::DimensionMismatch { expected: self.mode_count, found: other.mode_count });
        }
        self.steps.extend(other.steps.iter().cloned());
        Ok(())
    }

    /// Returns a copy without truncation markers.
    pub fn without_truncations(&self) -> Self {
        Self {
            mode_count: self.mode_count,
            steps: self.steps.iter().filter(|s| !matches!(s, Step::TruncateAux(_))).cloned().collect(),
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.steps.iter().filter_map(|s| match s {
            Step::Block(b) => Some(b),
            _ => None,
        })
    }

    pub fn truncation_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::TruncateAux(_))).count()
    }

    /// Product of all linear steps in application order, ignoring truncations.
    pub fn linear_product(&self) -> Result<ComplexMatrix> {
        let mut total = ComplexMatrix::identity(self.mode_count);
        for step in &self.steps {
            if let Some(t) = step.matrix(self.mode_count)? {
                total = &total * &t;
            }
        }
        Ok(total)
    }

    fn validate_step(&self, step: &Step) -> Result<()> {
        let m = self.mode_count;
        match step {
            Step::Linear(t) if t.rows() != m || t.cols() != m => {
                Err(Error::DimensionMismatch { expected: m, found: t.rows() })
            }
            Step::Block(b) if b.top + 1 >= m => Err(Error::ModeOutOfRange { mode: b.top + 1, modes: m }),
            Step::TruncateAux(modes) => match modes.iter().find(|&&a| a >= m) {
                Some(&bad) => Err(Error::ModeOutOfRange { mode: bad, modes: m }),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

/// Applies the program's steps to `input` in order.
pub fn run_program(program: &NetworkProgram, input: &PhotonicState) -> Result<PhotonicState> {
    if input.mode_count() != program.mode_count {
        return Err(Error::DimensionMismatch { expected: program.mode_count, found: input.mode_count() });
    }
    let mut state = input.clone();
    for step in &program.steps {
        state = match step {
            Step::TruncateAux(modes) => truncate_aux(&state, modes)?,
            other => {
                let t = other.matrix(program.mode_count)?.expect("linear step");
                apply_linear(&state, &t)?
            }
        };
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;

    #[test]
    fn empty_program_is_identity() {
        let s = PhotonicState::basis(OccupationVector::new(vec![0, 1, 0]));
        assert_eq!(run_program(&NetworkProgram::new(3), &s).unwrap(), s);
    }

    #[test]
    fn block_equals_linear_layer() {
        let b = Block::new(1, MziSetting::relative(0.8, 0.3), BlockRole::H);
        let s = PhotonicState::basis(OccupationVector::new(vec![0, 1, 1]));
        let mut p = NetworkProgram::new(3);
        p.push_block(b).unwrap();
        let direct = apply_linear(&s, &b.embedded(3).unwrap()).unwrap();
        assert_eq!(run_program(&p, &s).unwrap(), direct);
    }

    #[test]
    fn rejects_invalid_steps() {
        let mut p = NetworkProgram::new(3);
        assert!(p.push_truncation(vec![3]).is_err());
        assert!(p.push_block(Block::new(2, MziSetting::relative(0.0, 0.0), BlockRole::X)).is_err());
        assert!(p.push(Step::Linear(ComplexMatrix::identity(2))).is_err());
        let s = PhotonicState::basis(OccupationVector::new(vec![1, 0]));
        assert!(run_program(&p, &s).is_err());
    }

    #[test]
    fn role_symbols_match_serde() {
        for role in [BlockRole::Identity, BlockRole::R13Prime, BlockRole::Rz] {
            let json = serde_json::to_string(&role).unwrap();
            assert_eq!(json, format!("\"{}\"", role.symbol()));
        }
    }
}
