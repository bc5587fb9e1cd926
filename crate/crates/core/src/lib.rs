pub mod kleisli;
pub mod report;
pub mod schema;
pub mod instance;
pub mod narrative;
pub mod diagram;
pub mod render;
pub mod fable;
