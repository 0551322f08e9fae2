//! Wall-crossing: the `Loc = Cor` identity of a single wall, the transforms
//! of correlator series across walls and the genus-0 wall identity.

mod genus0;
mod loccor;
mod transform;

pub use crate::qfun::lau;
pub use genus0::{j_transform, GenusZeroReport};
pub use loccor::{
    cor_expression, direction_zero_lines, first_order_change, loc_expression, loc_expression_enumerated,
    loc_parts_ledgers, perturbed, verify_loc_eq_cor, Increment, Ledger, LocCorReport, Shape, WallInput,
};
pub use transform::{
    potential_transform, single_wall_transform, telescope, walls_between, CorrelatorSeries, Insertion, Symbol,
    TelescopeReport,
};
