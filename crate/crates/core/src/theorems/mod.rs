//! Checkers for the K-dual identities, the Parseval K-frame identities and
//! inequalities, and the constants `v±`.

mod identities;
mod report;
mod vconst;

pub use identities::{
    check_cor_2_2, check_cor_2_8, check_cor_2_9, check_lemma_2_6, check_thm_2_1, check_thm_2_3, check_thm_2_4,
    check_thm_2_5, conditioning, Cor28Report, Cor29Report,
};
pub use report::{IdentityReport, InequalityReport};
pub use vconst::{check_thm_2_7, v_constants, v_constants_direct, v_ratio_at, Thm27Report, VConstants};
