pub mod criterion;
pub mod denominator;
pub mod exact_algebra;
pub mod io;
pub mod linear_forms;
pub mod numerics;
pub mod qtoolkit;
