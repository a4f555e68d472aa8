//! Pairing-based attacks on oriented isogeny problems, an instance generator,
//! and the brute-force isogeny oracle every attack finishes with.

pub mod generate;
pub mod instance;
pub mod norm;
pub mod oracle;
pub mod ramified;
pub mod recover;
pub mod sidh;
pub mod two_orient;

pub use generate::{gen_instance, CustomFamily, Family, GenSpec};
pub use instance::{AttackInstance, InstanceBundle, Payload, Sealed, Variant};
pub use norm::{candidate_images, class_group_attack, recover_norm_lambda, CandidateSet, Recovered};
pub use oracle::{isogeny_oracle, IsogenyOracle, RejectReason, Verdict};
pub use ramified::{ramified_attack, ramified_tau_select, RamifiedResult, TauSelection};
pub use recover::recover_orientation;
pub use sidh::{diagonal_sidh, sidh1_attack, sidh1_to_sidh, DiagonalResult, TorsionImages};
pub use two_orient::{two_orientation_attack, TwoOrientResult};

use crate::curve::Isogeny;
use crate::error::Result;

/// Pick the verified candidate independently of evaluation order: the first
/// error wins, then the smallest index whose match needed no automorphism,
/// then the smallest accepted index.
pub(crate) fn select_verified(verdicts: Vec<Result<Verdict>>) -> Result<Option<(usize, Isogeny)>> {
    let mut accepted = Vec::new();
    for (i, v) in verdicts.into_iter().enumerate() {
        if let Verdict::Accept(phi) = v? {
            accepted.push((i, phi));
        }
    }
    let exact = accepted.iter().position(|(_, phi)| phi.post_scale().is_one());
    Ok(match exact {
        Some(k) => Some(accepted.swap_remove(k)),
        None => accepted.into_iter().next(),
    })
}
