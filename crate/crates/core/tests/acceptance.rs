//! Acceptance gate: one test per release criterion, each driving the same
//! suite machinery as the CLI and holding the relevant records to their
//! pinned tolerances and runtime budgets.

use std::time::Instant;

use symplecta::report::{suite_records, Record, SuiteConfig, SuiteName};

fn run(config: &SuiteConfig, suite: SuiteName, budget_seconds: f64) -> (Vec<Record>, f64) {
    let started = Instant::now();
    let (records, _aux) = suite_records(config, suite).expect("suite runs");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_seconds,
        "suite exceeded its runtime budget: {elapsed:.1}s >= {budget_seconds}s"
    );
    for record in records.iter().filter(|r| !r.soft) {
        assert!(
            record.pass,
            "hard record `{}` failed alongside the criterion: measured {:.3e} vs bound {:.3e}",
            record.name, record.measured, record.bound
        );
    }
    (records, elapsed)
}

fn find<'a>(records: &'a [Record], name: &str) -> &'a Record {
    records
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("record `{name}` missing"))
}

fn assert_passes(record: &Record, pinned_bound: f64) {
    assert_eq!(
        record.bound, pinned_bound,
        "tolerance drifted for `{}`",
        record.name
    );
    assert!(
        record.pass,
        "`{}` failed: measured {:.3e} vs bound {:.3e}",
        record.name, record.measured, record.bound
    );
    println!(
        "  {}: measured {:.3e} <= bound {:.3e}",
        record.name, record.measured, record.bound
    );
}

/// 500 seeded adjoint pairs on random dominating products, dims 2-40,
/// s over the full [0, 2] grid: measured norms within the interpolation
/// bounds at 1e-9, zero violations.
#[test]
fn criterion_1_adjoint_pair_norm_bounds() {
    let config = SuiteConfig::default();
    assert_eq!(config.continuity.instances, 500);
    assert_eq!(config.continuity.max_modes * 2, 40);
    assert_eq!(config.continuity.s_grid.len(), 9);
    let (records, elapsed) = run(&config, SuiteName::Continuity, 60.0);
    assert_passes(
        find(&records, "continuity/adjoint-pair-interpolated-norm-bound"),
        1e-9,
    );
    assert_passes(
        find(&records, "continuity/energy-isometry-norms-stay-unit"),
        1e-9,
    );
    println!("criterion 1 ok in {elapsed:.1}s");
}

/// The scaled family on 100 primary instances: domination on [0, 1],
/// common purification at 1e-9, and the rigidity of engineered |R| = c·1
/// levels (purity below 1 or domination above 1 happen only at c = 1).
#[test]
fn criterion_2_scaled_family_properties() {
    let config = SuiteConfig::default();
    assert_eq!(config.core.instances, 100);
    assert_eq!(config.core.s_grid, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let (records, elapsed) = run(&config, SuiteName::Core, 30.0);
    assert_passes(
        find(&records, "core/scaled-family-dominates-on-unit-interval"),
        1e-9,
    );
    assert_passes(
        find(&records, "core/scaled-family-purifications-collapse"),
        1e-9,
    );
    assert_passes(find(&records, "core/rigidity-pure-level-stays-pure"), 1e-8);
    assert_passes(
        find(&records, "core/rigidity-pure-level-dominates-above-one"),
        1e-9,
    );
    assert_passes(
        find(&records, "core/rigidity-squeezed-levels-lose-purity"),
        0.0,
    );
    assert_passes(
        find(&records, "core/rigidity-squeezed-levels-fail-above-one"),
        0.0,
    );
    println!("criterion 2 ok in {elapsed:.1}s");
}

/// Purification of the lattice energy product equals the ultrastatic
/// vacuum at 1e-9 relative Frobenius on 64, 128 and 256 sites: the two
/// independent code paths meet.
#[test]
fn criterion_3_energy_purification_meets_vacuum() {
    let mut config = SuiteConfig::default();
    config.kg.sizes = vec![64, 128, 256];
    config.kg.cutoff_sizes = vec![];
    let (records, elapsed) = run(&config, SuiteName::Kg, 60.0);
    for sites in [64, 128, 256] {
        assert_passes(
            find(
                &records,
                &format!("kg/n{sites}-energy-purification-meets-vacuum"),
            ),
            1e-9,
        );
        assert_passes(find(&records, &format!("kg/n{sites}-vacuum-is-pure")), 1e-8);
    }
    println!("criterion 3 ok in {elapsed:.1}s");
}

/// Cutoff evolutions on 64 and 128 sites, piecewise potential with ratio
/// 16: every measured H_τ ⊕ H_{τ-1} norm within the interpolation bound at
/// 1e-8; constant-potential case keeps every norm below 1 + 1e-9.
#[test]
fn criterion_4_cutoff_evolution_continuity() {
    let mut config = SuiteConfig::default();
    config.kg.sizes = vec![64];
    config.kg.cutoff_sizes = vec![64, 128];
    assert_eq!(config.kg.potential_step, 16.0);
    assert_eq!(config.kg.tau_grid, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let (records, elapsed) = run(&config, SuiteName::Kg, 120.0);
    for sites in [64, 128] {
        assert_passes(
            find(
                &records,
                &format!("kg/n{sites}-piecewise-cutoff-norm-bounds"),
            ),
            1e-8,
        );
        assert_passes(
            find(
                &records,
                &format!("kg/n{sites}-constant-potential-norms-stay-unit"),
            ),
            1e-9,
        );
        assert_passes(
            find(
                &records,
                &format!("kg/n{sites}-scaled-energy-identity-piecewise"),
            ),
            1e-9,
        );
    }
    println!("criterion 4 ok in {elapsed:.1}s");
}

/// Phase-multiplier scenario: the norm-growth ratio over translated bumps
/// fits a log-log slope of 2.0 ± 0.2 while the purified norms stay
/// invariant to 1e-12.
#[test]
fn criterion_5_phase_multiplier_growth() {
    let mut config = SuiteConfig::default();
    config.gallery.flip_sites = vec![];
    let (records, elapsed) = run(&config, SuiteName::Gallery, 30.0);
    assert_passes(
        find(
            &records,
            "gallery/phase-multiplier-growth-slope-is-quadratic",
        ),
        0.2,
    );
    assert_passes(
        find(&records, "gallery/phase-multiplier-flat-ratios-stay-unit"),
        1e-12,
    );
    assert_passes(
        find(
            &records,
            "gallery/phase-multiplier-translated-norms-constant",
        ),
        1e-10,
    );
    assert_passes(
        find(
            &records,
            "gallery/phase-multiplier-ratios-outgrow-any-bound",
        ),
        0.0,
    );
    println!("criterion 5 ok in {elapsed:.1}s");
}

/// Frequency-flip scenario: T is a μ-isometry to 1e-10, the flat-norm
/// ratio on mode k equals λ_k to 1e-8, and the top ratio grows at least
/// threefold when the site count doubles.
#[test]
fn criterion_6_frequency_flip_unboundedness() {
    let config = SuiteConfig::default();
    assert_eq!(config.gallery.flip_sites, vec![128, 256]);
    let (records, elapsed) = run(&config, SuiteName::Gallery, 30.0);
    for sites in [128, 256] {
        assert_passes(
            find(
                &records,
                &format!("gallery/frequency-flip-n{sites}-first-order-isometry"),
            ),
            1e-10,
        );
        assert_passes(
            find(
                &records,
                &format!("gallery/frequency-flip-n{sites}-mode-ratios-match-spectrum"),
            ),
            1e-8,
        );
        assert_passes(
            find(
                &records,
                &format!("gallery/frequency-flip-n{sites}-squares-to-minus-one"),
            ),
            1e-10,
        );
    }
    assert_passes(
        find(&records, "gallery/frequency-flip-refinement-grows-witness"),
        0.0,
    );
    println!("criterion 6 ok in {elapsed:.1}s");
}

/// The three-line interpolation bound on 500 random (X, Y, Q) triples with
/// dimensions up to 60 and τ from 0.1 to 0.9: zero violations at 1e-9,
/// including the growing-truncation ladder.
#[test]
fn criterion_7_interpolation_bound() {
    let config = SuiteConfig::default();
    assert_eq!(config.continuity.interpolation_instances, 500);
    assert_eq!(config.continuity.interpolation_max_dim, 60);
    let (records, elapsed) = run(&config, SuiteName::Continuity, 60.0);
    assert_passes(
        find(&records, "continuity/three-line-interpolation-bound"),
        1e-9,
    );
    assert_passes(
        find(&records, "continuity/truncation-ladder-bound-stability"),
        1e-9,
    );
    println!("criterion 7 ok in {elapsed:.1}s");
}

/// Quasifree round trip: covariance entries recovered from Weyl values to
/// 1e-6 at step 1e-3 on 100 seeded states; the one-particle inner-product
/// identities hold to 1e-10; the symplectic-complement involution is exact
/// by rank.
#[test]
fn criterion_8_quasifree_dictionary() {
    let mut config = SuiteConfig::default();
    config.probe.sizes = vec![];
    assert_eq!(config.probe.roundtrip_instances, 100);
    assert_eq!(config.probe.roundtrip_step, 1e-3);
    let (records, elapsed) = run(&config, SuiteName::Probe, 30.0);
    assert_passes(
        find(&records, "probe/weyl-roundtrip-recovers-covariance"),
        1e-6,
    );
    assert_passes(
        find(&records, "probe/one-particle-inner-product-identities"),
        1e-10,
    );
    assert_passes(
        find(&records, "probe/symplectic-complement-involution"),
        1e-9,
    );
    println!("criterion 8 ok in {elapsed:.1}s");
}

/// Local probes of the ultrastatic vacuum: the factor-criterion
/// intersection rank is zero for every proper arc on 16, 32 and 64 sites;
/// the duality gap is carried as soft data.
#[test]
fn criterion_9_local_probes() {
    let config = SuiteConfig::default();
    assert_eq!(config.probe.sizes, vec![16, 32, 64]);
    let (records, elapsed) = run(&config, SuiteName::Probe, 30.0);
    for sites in [16, 32, 64] {
        assert_passes(
            find(
                &records,
                &format!("probe/n{sites}-factor-intersection-rank-all-arcs"),
            ),
            0.0,
        );
        let gap = find(&records, &format!("probe/n{sites}-duality-gap"));
        assert!(gap.soft, "duality gap must stay soft data");
        println!("  probe/n{sites}-duality-gap (soft): {:.3e}", gap.measured);
    }
    println!("criterion 9 ok in {elapsed:.1}s");
}
