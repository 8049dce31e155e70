pub mod charclass;
pub mod cli;
pub mod cohomring;
pub mod deriv;
pub mod error;
pub mod f2linalg;
pub mod graded;
pub mod presentation;
pub mod ring2;
