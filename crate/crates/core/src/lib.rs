//! Combinatorial kernels for graph products of finite groups, their
//! right-angled buildings, holonomy and atlases, polygonal complexes with
//! walls and cocycles, two-dimensional Davis complexes and systems of local
//! reflections.
//!
//! Everything is exact: groups are multiplication tables, infinite objects
//! are explored through canonical normal forms on finite balls.

pub mod building;
pub mod cocycle;
pub mod complex;
pub mod config;
pub mod davis;
pub mod graph_product;
pub mod groups;
pub mod holonomy;
pub mod local_reflections;
pub mod polygonal;

pub use building::{AdjacencyType, Building, BuildingBall, BuildingError, BuildingVertex, Residue};
pub use complex::{cubical_cone, ComplexError, SimplicialComplex, TypedCubeComplex};
pub use davis::{CoxWord, CoxeterData, DavisError};
pub use graph_product::{NormalForm, ProductError, ProductPresentation};
pub use groups::{FiniteAbelian, FiniteGroup, GroupError, GroupHom, SubgroupData};
pub use polygonal::{PolygonalComplex, PolygonalError};
pub use config::ConfigError;
pub use holonomy::{Atlas, HolonomyError, HolonomyReport, LazyAutomorphism};
pub use local_reflections::{GraphAutomorphisms, LRSystem, LocalReflectionError, Region, Triangle};
