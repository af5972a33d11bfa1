//! Enumeration of Fano Bott manifolds through signed rooted forests.
//!
//! * [`forest`], [`canon`], [`enumerate`]: signed rooted forests, the flip
//!   operations `r_i`, canonical codes for isomorphism / `∼` / `≈`, and
//!   orderly generation of the classes.
//! * [`toric`]: Bott fans, Batyrev's Fano criterion and the correspondence
//!   between Fano Bott fans and signed rooted forests.
//! * [`series`], [`genfun`]: exact truncated power series and the
//!   generating functions `T(x)` and `F(x)`.
//! * [`cacti`]: rooted triangular cacti and their bijection with
//!   `∼`-classes of forests.

pub mod cacti;
pub mod canon;
pub mod enumerate;
pub mod forest;
pub mod genfun;
pub mod series;
pub mod toric;

pub use cacti::{cactus_to_forest, enumerate_cacti, forest_class_to_cactus, Cactus, CactusError, Triangle};
pub use canon::{are_equivalent, canonical_code, CanonicalCode, Relation};
pub use enumerate::{
    count_indecomposable_diffeo_classes, enumerate_forest_classes, enumerate_tree_classes, EnumError, EnumLimits,
};
pub use forest::{ForestError, Sign, SignedForest};
pub use genfun::{check_ratio_question, solve_functional_equation, GeneratingFunctions, RatioReport};
pub use series::{IntSeries, RatSeries, SeriesError};
pub use toric::{fan_to_forest, forest_to_fan, is_fano, primitive_relation, BottFan, FanoReport, ToricError};
