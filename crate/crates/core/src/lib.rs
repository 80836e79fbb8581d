pub mod cases;
pub mod category;
pub mod error;
pub mod laws;
pub mod lax;
pub mod model;
pub mod profunctor;
pub mod quantale;
pub mod random;

pub use category::QCategory;
pub use error::{Error, Result};
pub use lax::{LaxMap, Verdict};
pub use model::{ModelDocument, ResultTable};
pub use profunctor::DesignProblem;
pub use quantale::{QValue, Quantale, TNorm};
