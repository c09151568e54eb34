//! Concrete model families and the closed forms they are checked against.

pub mod bell;
pub mod factual;
mod measure;
pub mod partition;
pub mod qm;
pub mod record;
pub mod table;

pub use bell::{
    bell_assumption_tables, bell_constrained_exact, bell_constrained_record, BellAssumptionTables,
    BellConstrainedModel, CorrelationTriple,
};
pub use factual::FactualModel;
pub use partition::{
    cell_bound_integrand, cell_exact_bound, cell_tables, eight_partition_aggregate,
    eight_partition_record, CellBound, CellTables, EightPartition, EightPartitionModel,
};
pub use qm::{
    qm_conditional_opposite, qm_conditional_same, qm_expectation, qm_joint_table,
    qm_oracle_sample, QmSinglet,
};
pub use record::{Cell, SignRelations, SixFunctionRecord};
pub use table::{compose_through_shared, JointTable};
