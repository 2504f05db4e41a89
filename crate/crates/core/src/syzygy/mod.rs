//! Groebner bases and syzygies of submodules of `k[z_1..z_d]^r`.

pub mod groebner;
pub mod module;
pub mod resolution;

pub use groebner::{buchberger, buchberger_with_traces, Division, GroebnerBasis, MonomialOrder};
pub use module::{ModuleElement, Mono, Ring, Term};
pub use resolution::{
    columns, density, free_resolution, kernel_of_map, minimize, polynomialize, syzygies, DensityResult,
    FreeResolution,
};
