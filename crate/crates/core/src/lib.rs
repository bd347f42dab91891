//! Data-availability machinery for blockchain light clients: LDPC erasure
//! codes, coded Merkle trees, fraud proofs, a simulator for the data
//! availability attack game, and closed-form bounds on the adversary's
//! success probability.


pub mod analysis;
pub mod cmt;
pub mod codes;
pub mod fraud;
pub mod game;
pub mod rng;
