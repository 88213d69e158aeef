//! Exact completeness decisions for vector fields `dz_i/dt = z_i p_i(z)` on
//! the algebraic torus `(C*)^n`, where the `p_i` are Laurent polynomials with
//! Gaussian-rational coefficients.
//!
//! ```
//! use torus_fields::{parse_poly, default_vars, VectorField};
//!
//! let vars = default_vars("z", 2);
//! let field = VectorField::new(vec![
//!     parse_poly("0", &vars).unwrap(),
//!     parse_poly("-z1", &vars).unwrap(),
//! ])
//! .unwrap();
//! let cert = field.decide_complete().unwrap();
//! assert!(cert.is_complete());
//! assert!(cert.verify(&field));
//! ```

pub mod cli;
pub mod document;
pub mod error;
pub mod field;
pub mod flow;
pub mod gaussian;
pub mod lattice;
pub mod laurent;
pub mod text;

pub use document::{CertificateDocument, Document, FieldDocument};
pub use error::{Error, Result};
pub use field::{CompletenessCertificate, Form2, ReductionStep, Terminal, VectorField, Verdict};
pub use flow::{integrate_numeric, ExactFlow, FlowResult, FlowStatus, NumericOptions};
pub use gaussian::GaussianRational;
pub use lattice::{GeneratorSet, LatticeBasis};
pub use laurent::{Exponent, LaurentPoly};
pub use text::{default_vars, format_poly, parse_coefficient, parse_poly, ParseError};
