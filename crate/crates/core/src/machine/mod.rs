//! J-pointing tapes, j-pushdown automata compiled from DPCF descriptions, the
//! Judge loop and the stand-alone j-stack mode.

use thiserror::Error;

use crate::pcf::{DpcfError, Ty};
use crate::strategies::Selector;

pub mod compile;
pub mod jpa;
pub mod judge;
pub mod tape;

pub use compile::{compile, Decision, JpaMachine};
pub use jpa::{decode_stack, dump_stack, p_view_dollars, Config, Motion, Phase, RunLog, StackResult, DEFAULT_BUDGET};
pub use judge::{
    evaluate, evaluate_boolean, evaluate_numeral, interact, jsa_standalone_run, judge_move, read_value,
    InteractOptions, OpponentPolicy, PlayTrace, Snapshot, Value,
};
pub use tape::{encode_position, JTape, Sym};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("step budget of {0} exhausted")]
    Diverged(usize),
    #[error("machine stuck: {0}")]
    Stuck(String),
    #[error("malformed stack: {0}")]
    BadStack(String),
    #[error("malformed tape: {0}")]
    BadTape(String),
    #[error("discipline violation: {0}")]
    Discipline(String),
    #[error("selector {0} does not resolve in the P-view")]
    Selector(Selector),
    #[error("opponent produced an illegal move: {0}")]
    Policy(String),
    #[error("illegal position: {0}")]
    Illegal(String),
    #[error("not a ground program type: {0}")]
    NotGround(Ty),
    #[error(transparent)]
    Desc(#[from] DpcfError),
}
