//! Uncertain wiretap channels, zero-error secrecy codes, and secure state
//! estimation of an unstable scalar plant over such a channel.
//!
//! The crate is organised bottom up:
//!
//! * [`channel`]: set-valued channels and their algebra.
//! * [`structures`]: confusability graphs, eavesdropper hypergraphs and the
//!   elimination of unusable inputs.
//! * [`codes`]: verification and exhaustive search of (wiretap) codes.
//! * [`quantizer`]: the adaptive interval quantizer, in exact rationals.
//! * [`sim`]: plant, transmission scheme, eavesdropper tracking, reports.
//! * [`experiments`]: canned reproductions and command implementations.

pub mod catalog;
pub mod channel;
pub mod codes;
pub mod error;
pub mod experiments;
pub mod quantizer;
pub mod rational;
pub mod sim;
pub mod structures;

pub use channel::{Alphabet, ChannelFile, UncertainChannel, WiretapChannel};
pub use codes::WiretapCode;
pub use error::{Error, Result};
pub use quantizer::{Quantizer, QuantizerCell, SystemParams};
pub use rational::{Interval, Rational};
