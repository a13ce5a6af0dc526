//! Diploid genome assembly laboratory.
//!
//! Small circular diploid genomes, error-free reads, exhaustive repeat
//! enumeration, three assembly paradigms (greedy merging, de Bruijn graphs,
//! overlap graphs) with their reconstruction conditions, and the coverage
//! bounds that turn repeat statistics into read-length/coverage requirements.

pub mod counterexamples;
pub mod coverage;
pub mod dbg;
pub mod error;
pub mod genome;
pub mod greedy;
pub mod io;
pub mod olc;
pub mod oracle;
pub mod repeats;
pub mod simulate;

pub use error::{Error, Result};
pub use genome::{
    overlap, switch_equivalent, union, CircularSequence, DiploidGenome, Provenance, Read, ReadSet,
};
pub use repeats::{
    DoubleRepeat, Placements, RepeatCatalog, RepeatCopy, RepeatProfile, TableStats, TripleRepeat,
};
pub use simulate::SimulationParams;
