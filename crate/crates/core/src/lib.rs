//! Exact computations on nilpotent Lie algebras given by structure equations:
//! Chevalley-Eilenberg cohomology, classical invariants, generalized complex
//! structures and the isomorphism argument for the family `g_alpha`.

pub mod cdga;
pub mod exterior;
pub mod frontend;
pub mod gcs;
pub mod invariants;
pub mod iso;
pub mod linalg;
pub mod scalars;

/// Presentation over `Q(params)[sqrt(3+alpha)][i]`, the type the DSL produces.
pub type ExactPresentation = cdga::Presentation<scalars::CScalar>;
/// Presentation with rational structure constants.
pub type RationalPresentation = cdga::Presentation<scalars::Rational>;
/// Floating presentation for numeric cross-checks.
pub type FloatPresentation = cdga::Presentation<num_complex::Complex64>;
pub type ExactForm = exterior::Form<scalars::CScalar>;
pub type RationalForm = exterior::Form<scalars::Rational>;
pub type ExactGcs = gcs::GcsData<scalars::CScalar>;
