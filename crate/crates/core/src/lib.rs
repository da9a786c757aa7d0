pub mod monoids;
pub mod numerics;
pub mod spaces;
pub mod cayley;
pub mod actions;
pub mod svarcmilnor;
