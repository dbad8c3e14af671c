//! Exact computations for representations of restricted sl(n) in positive
//! characteristic and the geometry that counts them.
//!
//! The building blocks are [`fplinalg`] (matrices over F_p and a Meataxe),
//! [`rootdata`] (type A weights, Weyl group, alcoves), [`envalg`] (baby Verma
//! modules, translation, block enumeration), [`weylalg`] (crystalline
//! differential operators), [`springer`] (Springer fiber point counts) and
//! [`eulerbwb`] (Borel–Weil–Bott). [`suite`] and [`cli`] tie them together.

pub mod cli;
pub mod envalg;
pub mod eulerbwb;
pub mod fplinalg;
pub mod polyq;
pub mod report;
pub mod rootdata;
pub mod springer;
pub mod suite;
pub mod weylalg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Env(#[from] envalg::EnvError),
    #[error(transparent)]
    Weyl(#[from] weylalg::WeylError),
    #[error(transparent)]
    Springer(#[from] springer::SpringerError),
    #[error(transparent)]
    Bwb(#[from] eulerbwb::BwbError),
    #[error(transparent)]
    Root(#[from] rootdata::RootError),
    #[error(transparent)]
    Module(#[from] fplinalg::ModuleError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
