//! Protocol library and deterministic discrete-event simulator for
//! multiple-IMSI pseudonymity schemes layered on 3G AKA.
//!
//! A USIM normally carries one fixed IMSI for its whole lifetime, so any
//! cleartext exposure of that IMSI on the air interface is a long-term
//! tracking handle. The schemes modelled here rotate the IMSI instead,
//! using only machinery that is invisible to serving networks and phones:
//!
//! - **Scheme A** — the USIM holds a predefined IMSI list and switches on
//!   its own schedule (e.g. every N authentications).
//! - **Scheme B** — the home network holds the list and signals a switch
//!   by embedding an authenticated marker (SMAC) in the AKA challenge.
//! - **Scheme C** — the home network dynamically assigns fresh IMSIs from
//!   a pool, shipping the new MSIN encrypted inside the AKA challenge and
//!   tracking a free / in-transit / allocated lifecycle per IMSI.
//!
//! Module map:
//!
//! - [`identity`] — IMSI value type, BCD packing of an MSIN into the
//!   challenge, pool status types.
//! - [`crypto`] — MILENAGE f1–f5 plus the derived SMAC and EK primitives.
//! - [`aka`] — authentication-vector generation (all three RAND modes) and
//!   USIM-side verification / signal detection.
//! - [`home_network`] — subscriber database, IMSI pool lifecycle, change
//!   policy, and the vector-request entry point that performs implicit
//!   acknowledgement.
//! - [`usim`] — card-side state: EF_IMSI, proactive REFRESH / DISPLAY TEXT
//!   signalling, scheme-A self-initiated changes.
//! - [`air_interface`] — ME and serving-network behaviour: attach flows,
//!   TMSI management, vector buffering, cleartext-IMSI exposure.
//! - [`adversary`] — passive/active observers and linkability analysis.
//! - [`harness`] — seeded discrete-event scheduler, scenario loading,
//!   trace and metrics emission, exhaustive small-run enumeration.
//! - [`scan`] — Monte-Carlo corpus scans (false-signal rate, forgery
//!   resistance, challenge indistinguishability corpora).
//! - [`sweep`] — multi-seed scenario sweeps with aggregate statistics.
//!
//! Every simulation run is a pure function of (scenario, seed): a single
//! run is strictly single-threaded. The `parallel` feature (on by default)
//! parallelises only across independent runs and across Monte-Carlo
//! chunks, with per-chunk derived seeds, so results are identical with the
//! feature on or off.

pub mod adversary;
pub mod aka;
pub mod air_interface;
pub mod crypto;
pub mod harness;
pub mod home_network;
pub mod identity;
pub mod scan;
pub mod sweep;
pub mod usim;

pub use identity::{Imsi, ImsiStatus, Tmsi};

/// Number of worker threads the parallel paths will use (1 without the
/// `parallel` feature).
pub fn worker_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
