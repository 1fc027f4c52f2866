//! Random Cayley graphs over `Sym(n)`, `SL_2(F_p)`, `PGL_2(F_p)` and the
//! iterated wreath products `W_n(2)`: exact girth by shortest-relation
//! search, word-map probabilities, analytic bounds, and the crossover model
//! that controls word maps on `W_n(2)`.

pub mod cli;
pub mod experiments;
pub mod genetics;
pub mod girth;
pub mod groups;
pub mod parallel;
pub mod words;

pub use girth::{girth, girth_oracle, GeneratorTuple, GirthOutcome, GirthResult};
pub use groups::{Family, Group, GroupContext};
pub use words::ReducedWord;
