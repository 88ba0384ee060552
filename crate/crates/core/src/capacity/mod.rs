//! Capacity of the risk mapper and deterministic risk-generating models.

mod blahut;
mod collision;
mod deterministic;

pub use blahut::{
    blahut_arimoto, capacity_gap, BlahutArimoto, CapacityBounds, CapacityResult,
    DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};
pub use collision::{
    collision_channel, collision_margin, is_collision, CollisionGrid, CollisionScenario,
    CollisionSweep, GridAxis, COLLISION, NO_COLLISION,
};
pub use deterministic::{deterministic_capacity, DeterministicCapacity, DeterministicMapper};
