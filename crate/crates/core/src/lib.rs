//! Fully Eulerian finite element simulation of a fluid, an elastic solid and
//! a thin porous wall layer, with relaxed penalty contact against the wall.

pub mod geom;
pub mod mesh;
pub mod fem;
pub mod dofs;
pub mod fluid;
pub mod porous;
pub mod solid;
pub mod system;
pub mod driver;
pub mod config;
pub mod output;
