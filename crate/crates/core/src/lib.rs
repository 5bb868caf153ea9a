//! Game-semantic strategies for PCF realized as j-pushdown automata.

pub mod constructions;
pub mod games;
pub mod machine;
pub mod pcf;
pub mod strategies;
pub mod tags;

pub use games::{Game, Move, Occ, Position, Substance};
pub use strategies::{check_strategy, hide_strategy, Response, Selector, Strategy, StrategyError};
pub use tags::{InnerTag, Letter, NatSeq, OuterTag, TagToken};
