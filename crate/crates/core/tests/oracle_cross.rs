//! Cross-validation of the rank engine against the Groebner oracle on
//! every bundled system over Q: the oracle's transcendence degree of each
//! truncation must equal the variable count minus the exact Jacobian rank.

use dindex_core::jacobi::build_jk;
use dindex_core::oracle::{trdeg_oracle, truncated_ideal, OracleLimits};
use dindex_core::rank::{rank_exact, Evaluator};
use dindex_core::sysfile::{SystemFile, EXAMPLE_SYSTEM_JSON};

const SYSTEMS: [(&str, &str); 4] = [
    ("golden", EXAMPLE_SYSTEM_JSON),
    (
        "fixed-point",
        r#"{
          "variables": ["y1"],
          "equations": ["y1@1 - y1"],
          "specialization": { "assign": { "y1": "1" } }
        }"#,
    ),
    (
        "two-step",
        r#"{
          "variables": ["y1"],
          "equations": ["y1@2 - y1@1 - y1"],
          "specialization": {
            "target_field": {
              "generators": ["a", "b"],
              "sigma_images": { "a": "b", "b": "a + b" }
            },
            "assign": { "y1": "a" }
          }
        }"#,
    ),
    (
        "product",
        r#"{
          "variables": ["y1", "y2"],
          "equations": ["y1@1 - y1*y2"],
          "specialization": {
            "target_field": {
              "generators": ["u", "t"],
              "sigma_images": { "u": "u*t", "t": "t" }
            },
            "assign": { "y1": "u", "y2": "t" }
          }
        }"#,
    ),
];

#[test]
fn oracle_and_engine_agree_on_every_bundled_system() {
    let limits = OracleLimits::default();
    for (name, text) in SYSTEMS {
        let (sys, sp) = SystemFile::from_json(text).unwrap().load().unwrap();
        let (n, e) = (sys.n(), sys.e);
        let mut ev = Evaluator::new(&sys, &sp).unwrap();
        for k in 1..=3usize {
            if (k + e) * n > limits.var_limit {
                continue;
            }
            let rank = rank_exact(&ev.eval_matrix(&build_jk(&sys, k)));
            let t = truncated_ideal(&sys, k).unwrap();
            let trdeg = trdeg_oracle(&t, &limits).unwrap();
            assert_eq!(
                trdeg,
                (k + e) * n - rank,
                "{name}: trdeg(level {k}) vs rank complement"
            );
        }
    }
}
