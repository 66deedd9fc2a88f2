// SPDX-License-Identifier: Apache-2.0
//! Logic synthesis into phased networks of symmetric Boolean functions.

pub mod cube;
pub mod decompose;
pub mod error;
pub mod grid;
pub mod netlist;
pub mod planar;
pub mod spectrum;
pub mod symmetry;
pub mod tcell;

pub use cube::{Cover, Cube, Literal, MintermSet, PhaseVector};
pub use error::{Error, Result};
pub use spectrum::{FullRankSet, RankSpectrum};
