//! Self-verification suites: oracle-equivalence and invariant sweeps over
//! desk-scale corpora. Each suite checks one acceptance property of the
//! library, prints machine-readable results through the CLI, and doubles
//! as the integration gate.

use crate::arith::{factorize, lcm, SplitMix64};
use crate::classify;
use crate::cyclotomic::CyclotomicInt;
use crate::dense::{DenseForm, GramCandidates, GroupCtx};
use crate::distinguish::{self, groups_of_order, ExperimentConfig};
use crate::form::{Bicharacter, SymmetricForm};
use crate::gauss::{
    classical_gauss, legendre, zeta_closed_from_blocks, AlgebraicUnit, ZetaEngine,
};
use crate::group::{torsion_order, FiniteAbelianGroup};
use crate::tycat::pentagon::{
    verify_duality_perturbed, verify_pentagon_perturbed, verify_pentagon_raw_table, Perturbation,
};
use crate::tycat::{
    fs_indicator, fs_indicator_center_sum, global_dim_center, lens_invariant, tau_k_closed,
    tau_k_closed_cyclotomic, tau_k_direct, LensInvariant, Rational, TYData,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Reduced bounds, suites 1-6; finishes in seconds.
    Quick,
    /// The full verification corpus, suites 1-9.
    Full,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Counts of what was swept.
    pub detail: String,
    /// First few failure descriptions.
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "failures": self.failures,
            "seconds": self.seconds,
        })
    }
}

const MAX_RECORDED_FAILURES: usize = 12;

/// Accumulates failures with a cap on stored messages.
#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    messages: Vec<String>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        for m in other.messages {
            if self.messages.len() < MAX_RECORDED_FAILURES {
                self.messages.push(m);
            }
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < MAX_RECORDED_FAILURES {
                self.messages.push(msg());
            }
        }
    }
}

fn finish(id: u8, name: &'static str, start: Instant, tally: Tally, detail: String) -> SuiteResult {
    SuiteResult {
        id,
        name,
        passed: tally.failures == 0,
        detail: format!("{detail}; {} checks, {} failures", tally.checks, tally.failures),
        failures: tally.messages,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the requested suites in order. Suites 1 and 2 share one corpus
/// walk and are always produced together when either is requested.
pub fn run_suites(level: Level, ids: &[u8]) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    if ids.contains(&1) || ids.contains(&2) {
        let (s1, s2) = suite_zeta(level);
        if ids.contains(&1) {
            out.push(s1);
        }
        if ids.contains(&2) {
            out.push(s2);
        }
    }
    for &id in ids {
        match id {
            1 | 2 => {}
            3 => out.push(suite_trichotomy(level)),
            4 => out.push(suite_classical_gauss(level)),
            5 => out.push(suite_tau_lens(level)),
            6 => out.push(suite_structural(level)),
            7 => out.push(suite_classification(level)),
            8 => out.push(suite_distinguish(level)),
            9 => out.push(suite_fs_indicator(level)),
            _ => {}
        }
    }
    out.sort_by_key(|s| s.id);
    out
}

pub fn run_all(level: Level) -> Vec<SuiteResult> {
    match level {
        Level::Quick => run_suites(level, &[1, 2, 3, 4, 5, 6]),
        Level::Full => run_suites(level, &[1, 2, 3, 4, 5, 6, 7, 8, 9]),
    }
}

/// All factor lists of prime-power orders up to the bound.
fn prime_power_groups(max_order: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        if factorize(n).len() == 1 {
            out.extend(groups_of_order(n));
        }
    }
    out
}

/// Deterministic sample of non-prime-power groups with orders in the
/// given range: `count` orders, one factor list and several forms each.
fn sampled_groups(min_order: u64, max_order: u64, count: usize, rng: &mut SplitMix64) -> Vec<Vec<u64>> {
    let candidates: Vec<u64> = (min_order..=max_order)
        .filter(|&n| factorize(n).len() >= 2)
        .collect();
    let mut out = Vec::new();
    for _ in 0..count {
        if candidates.is_empty() {
            break;
        }
        let n = candidates[rng.below(candidates.len() as u64) as usize];
        let lists = groups_of_order(n);
        let list = lists[rng.below(lists.len() as u64) as usize].clone();
        out.push(list);
    }
    out
}

/// Draws a random admissible Gram matrix over the context modulus.
fn random_gram(ctx: &GroupCtx, rng: &mut SplitMix64) -> Vec<u32> {
    let factors = ctx.group.factors();
    let rank = ctx.rank;
    let mut gram = vec![0u32; rank * rank];
    for i in 0..rank {
        for j in i..rank {
            let m = crate::arith::gcd(factors[i], factors[j]);
            let v = (rng.below(m) * (ctx.l as u64 / m)) as u32;
            gram[i * rank + j] = v;
            gram[j * rank + i] = v;
        }
    }
    gram
}

fn random_nondegenerate_gram(ctx: &GroupCtx, rng: &mut SplitMix64) -> Option<Vec<u32>> {
    for _ in 0..200 {
        let gram = random_gram(ctx, rng);
        let form = DenseForm::new(ctx, gram.clone());
        if form.is_nondegenerate(ctx) {
            return Some(gram);
        }
    }
    None
}

fn form_label(ctx: &GroupCtx, dense: &DenseForm) -> String {
    SymmetricForm::from_dense(ctx, dense).to_string()
}

// ---------------------------------------------------------------------
// Suites 1 + 2: triple-oracle zeta agreement and the fixed points.
// ---------------------------------------------------------------------

fn suite_zeta(level: Level) -> (SuiteResult, SuiteResult) {
    let start = Instant::now();
    let (exhaustive_max, k_max, sample_count, sample_max) = match level {
        Level::Quick => (27, 20u64, 3usize, 60),
        Level::Full => (125, 50, 14, 500),
    };
    let mut t1 = Tally::default();
    let mut t2 = Tally::default();
    let mut forms_seen: u64 = 0;

    let mut groups = prime_power_groups(exhaustive_max);
    groups.push(vec![1]);
    let mut rng = SplitMix64::new(0x7a1e_5eed);
    let sampled = sampled_groups(2, sample_max, sample_count, &mut rng);

    // Exhaustive prime-power corpus.
    for factors in &groups {
        let group = FiniteAbelianGroup::new(factors).unwrap();
        let ctx = GroupCtx::new(&group);
        let odd_p = match factorize(group.order()).as_slice() {
            [(p, _)] if p % 2 == 1 => Some(*p),
            _ => None,
        };
        let mut candidates = GramCandidates::new(&ctx);
        loop {
            let chunk: Vec<Vec<u32>> = candidates.by_ref().take(8192).collect();
            if chunk.is_empty() {
                break;
            }
            let results: Vec<(u64, Tally, Tally)> = chunk
                .into_par_iter()
                .map(|gram| zeta_check_one(&ctx, gram, odd_p, k_max))
                .collect();
            for (seen, a, b) in results {
                forms_seen += seen;
                t1.merge(a);
                t2.merge(b);
            }
        }
    }
    // Sampled larger corpus.
    for factors in &sampled {
        let group = FiniteAbelianGroup::new(factors).unwrap();
        let ctx = GroupCtx::new(&group);
        let mut rng = SplitMix64::new(group.order().wrapping_mul(0x9e37_79b9));
        for _ in 0..6 {
            if let Some(gram) = random_nondegenerate_gram(&ctx, &mut rng) {
                let (seen, a, b) = zeta_check_one(&ctx, gram, None, k_max);
                forms_seen += seen;
                t1.merge(a);
                t2.merge(b);
            }
        }
    }

    let detail = format!(
        "{forms_seen} nondegenerate forms (exhaustive prime-power orders <= {exhaustive_max}, sampled to {sample_max}), k <= {k_max}"
    );
    let s1 = finish(
        1,
        "triple-oracle zeta agreement",
        start,
        t1,
        detail.clone(),
    );
    let s2 = finish(2, "zeta fixed points and snapping", start, t2, detail);
    (s1, s2)
}

/// Checks one Gram candidate; returns (forms counted, suite-1 tally,
/// suite-2 tally).
fn zeta_check_one(
    ctx: &GroupCtx,
    gram: Vec<u32>,
    odd_p: Option<u64>,
    k_max: u64,
) -> (u64, Tally, Tally) {
    let mut t1 = Tally::default();
    let mut t2 = Tally::default();
    let dense = DenseForm::new(ctx, gram);
    if !dense.is_nondegenerate(ctx) {
        return (0, t1, t2);
    }
    let blocks = odd_p.map(|p| classify::split_dense(ctx, &dense, p));
    let engine = match ZetaEngine::from_dense(ctx, dense) {
        Ok(e) => e,
        Err(e) => {
            t1.check(false, || format!("engine construction failed: {e}"));
            return (1, t1, t2);
        }
    };
    let brute = engine.brute_range(k_max);
    let (prin, radicals) = engine.prin_range_with_radicals(k_max);
    for (k, &rad) in radicals.iter().enumerate() {
        // The radical of chi^{-k} is the k-torsion subgroup.
        t1.check(rad == torsion_order(&ctx.group, k as u64), || {
            format!(
                "radical of chi^-{k} has size {rad} != |A_{k}| on {}",
                form_label(ctx, &engine_form(&engine))
            )
        });
    }
    for ((k, b), p) in brute.iter().enumerate().zip(prin) {
        let k = k as u64;
        t1.check(*b == p && b.is_snapped(), || {
            format!(
                "brute {} != prin {} at k={k} on {}",
                b,
                p,
                form_label(ctx, &engine_form(&engine))
            )
        });
        t2.check(b.is_snapped() && p.is_snapped(), || {
            format!("unsnapped zeta at k={k} on {}", form_label(ctx, &engine_form(&engine)))
        });
        if let Some(blocks) = &blocks {
            match blocks {
                Ok(split) => {
                    let c = zeta_closed_from_blocks(&split.blocks, split.p, k)
                        .unwrap_or(AlgebraicUnit::Zero);
                    t1.check(*b == c, || {
                        format!(
                            "brute {} != closed {} at k={k} on {}",
                            b,
                            c,
                            form_label(ctx, &engine_form(&engine))
                        )
                    });
                }
                Err(e) => t1.check(false, || format!("splitting failed: {e}")),
            }
        }
    }
    // Fixed points: zeta_1 = 1 and zeta_{8|A|} = 1.
    let n = ctx.group.order();
    t2.check(brute[1.min(brute.len() - 1)] == AlgebraicUnit::ONE, || {
        format!("zeta_1 != 1 on {}", form_label(ctx, &engine_form(&engine)))
    });
    let b8n = engine.brute(8 * n);
    let p8n = engine.prin(8 * n);
    t2.check(
        b8n == AlgebraicUnit::ONE && p8n == AlgebraicUnit::ONE,
        || format!("zeta_(8|A|) != 1 on {}", form_label(ctx, &engine_form(&engine))),
    );
    (1, t1, t2)
}

fn engine_form<'a>(engine: &'a ZetaEngine<'_>) -> &'a DenseForm {
    engine.dense_form()
}

// ---------------------------------------------------------------------
// Suite 3: Gauss sum trichotomy and the cyclotomic oracle.
// ---------------------------------------------------------------------

fn suite_trichotomy(level: Level) -> SuiteResult {
    let start = Instant::now();
    let (exhaustive_max, candidate_cap, sample_count, sample_max, oracle_max) = match level {
        Level::Quick => (12u64, 1024u128, 4usize, 40u64, 20u64),
        Level::Full => (20, 4096, 12, 200, 100),
    };
    let mut tally = Tally::default();
    let mut forms: u64 = 0;
    let mut maps: u64 = 0;
    let mut oracle_checks: u64 = 0;

    // Exhaustive over small groups (all forms, degenerate included), plus
    // prime-power groups up to 81 whose candidate spaces stay small.
    let mut group_lists: Vec<Vec<u64>> = Vec::new();
    for n in 1..=exhaustive_max {
        group_lists.extend(groups_of_order(n));
    }
    if matches!(level, Level::Full) {
        for factors in prime_power_groups(81) {
            let g = FiniteAbelianGroup::new(&factors).unwrap();
            if g.order() > exhaustive_max
                && crate::dense::gram_candidate_count(&g) <= candidate_cap
            {
                group_lists.push(factors);
            }
        }
    }
    for factors in &group_lists {
        let group = FiniteAbelianGroup::new(factors).unwrap();
        if crate::dense::gram_candidate_count(&group) > candidate_cap {
            continue;
        }
        let ctx = GroupCtx::new(&group);
        let grams: Vec<Vec<u32>> = GramCandidates::new(&ctx).collect();
        let results: Vec<(u64, Tally)> = grams
            .into_par_iter()
            .map(|gram| {
                let mut t = Tally::default();
                let m = trichotomy_check_form(&ctx, gram, group.order() <= oracle_max, &mut t);
                (m, t)
            })
            .collect();
        forms += results.len() as u64;
        for (m, t) in results {
            maps += m;
            if group.order() <= oracle_max {
                oracle_checks += m.min(4);
            }
            tally.merge(t);
        }
    }
    // Sampled larger forms.
    let mut rng = SplitMix64::new(0x3170_c0de);
    for factors in sampled_groups(exhaustive_max + 1, sample_max, sample_count, &mut rng) {
        let group = FiniteAbelianGroup::new(&factors).unwrap();
        let ctx = GroupCtx::new(&group);
        for _ in 0..4 {
            let gram = random_gram(&ctx, &mut rng);
            forms += 1;
            maps += trichotomy_check_form(&ctx, gram, group.order() <= oracle_max, &mut tally);
        }
    }
    finish(
        3,
        "Gauss sum trichotomy + cyclotomic oracle",
        start,
        tally,
        format!("{forms} forms (degenerate included), {maps} quadratic maps, {oracle_checks} exact-oracle maps"),
    )
}

/// Sweeps every quadratic map of the form: trichotomy numerically, eighth
/// roots for homogeneous maps, and the exact |S|^2 = |A||A_perp| identity
/// on a few maps per form when the oracle is enabled.
fn trichotomy_check_form(
    ctx: &GroupCtx,
    gram: Vec<u32>,
    oracle: bool,
    tally: &mut Tally,
) -> u64 {
    let dense = DenseForm::new(ctx, gram);
    let radical = dense.radical_indices(ctx);
    let mu0 = match dense.homogeneous_mu0(ctx) {
        Ok(m) => m,
        Err(e) => {
            tally.check(false, || format!("mu0 construction failed: {e}"));
            return 0;
        }
    };
    let n = ctx.n;
    let l = ctx.l as u64;
    let norm = ((n as f64) * radical.len() as f64).sqrt();
    let exp = ctx.group.exponent();
    let factors = ctx.group.factors().to_vec();
    let conductor = lcm(2 * ctx.group.exponent(), 8) as u32;
    let mut checked = 0u64;
    let mut char_tab = Vec::new();
    for c in 0..n {
        // Character twist via the standard pairing.
        let gen_vals: Vec<u32> = ctx
            .coords_of(c)
            .iter()
            .enumerate()
            .map(|(i, &ci)| ((ci as u64 * (l / factors[i])) % l) as u32)
            .collect();
        crate::dense::fill_linear(ctx, &gen_vals, &mut char_tab);
        let values: Vec<u32> = (0..n)
            .map(|a| {
                let mut v = mu0[a] + char_tab[a];
                if v >= ctx.l {
                    v -= ctx.l;
                }
                v
            })
            .collect();
        let nonzero_on_radical = radical.iter().any(|&r| values[r as usize] != 0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &v in &values {
            sum += ctx.lut[v as usize];
        }
        let gamma = sum / norm;
        if nonzero_on_radical {
            tally.check(gamma.norm() < 1e-9, || {
                format!(
                    "gamma not zero ({}) for radical-nonvanishing map c={c} on {}",
                    gamma.norm(),
                    form_label(ctx, &dense)
                )
            });
        } else {
            tally.check((gamma.norm() - 1.0).abs() < 1e-9, || {
                format!(
                    "|gamma| = {} != 1 for radical-vanishing map c={c} on {}",
                    gamma.norm(),
                    form_label(ctx, &dense)
                )
            });
        }
        // Homogeneity: mu(k a) = k^2 mu(a) for all a, 0 <= k < exponent.
        let homogeneous = (0..n).all(|a| {
            let base = values[a] as u64;
            (0..exp).all(|k| values[ctx.scale_idx(k as i64, a)] as u64 == base * (k * k % l) % l)
        });
        if homogeneous && !nonzero_on_radical {
            let j = ((gamma.arg() / (std::f64::consts::PI / 4.0))
                .round()
                .rem_euclid(8.0)) as u8
                % 8;
            let dist = (gamma - crate::gauss::eighth_root(j)).norm();
            tally.check(dist < 1e-9, || {
                format!(
                    "homogeneous gamma {gamma} off the eighth-root grid by {dist} on {}",
                    form_label(ctx, &dense)
                )
            });
        }
        // Exact cyclotomic oracle on the first few maps per form.
        // Small conductors get the oracle on every map; larger forms
        // on the first few translates.
        if oracle && (conductor <= 60 || c < 4) {
            let mut s = CyclotomicInt::zero(conductor);
            for &v in &values {
                s.add_root(v as u64 * (conductor as u64 / l), 1);
            }
            if nonzero_on_radical {
                tally.check(s.is_zero(), || {
                    format!("exact sum nonzero for a zero Gauss sum on {}", form_label(ctx, &dense))
                });
            } else {
                let target =
                    CyclotomicInt::from_integer(conductor, (n as u64 * radical.len() as u64) as i64);
                tally.check(s.norm_value() == target, || {
                    format!(
                        "|S|^2 != |A| |A_perp| exactly on {} (c={c})",
                        form_label(ctx, &dense)
                    )
                });
            }
        }
        checked += 1;
    }
    checked
}

// ---------------------------------------------------------------------
// Suite 4: classical Gauss formulas.
// ---------------------------------------------------------------------

fn suite_classical_gauss(level: Level) -> SuiteResult {
    let start = Instant::now();
    let s_max = match level {
        Level::Quick => 3,
        Level::Full => 5,
    };
    let mut tally = Tally::default();
    let mut sums = 0u64;
    for p in [3u64, 5, 7] {
        for s in 1..=s_max {
            let ps = p.pow(s);
            // Direct summation table: root lookup plus squares mod p^s.
            let lut: Vec<Complex64> = (0..ps)
                .map(|v| {
                    let theta = 2.0 * std::f64::consts::PI * v as f64 / ps as f64;
                    Complex64::new(theta.cos(), theta.sin())
                })
                .collect();
            let squares: Vec<u64> = (0..ps).map(|j| j * j % ps).collect();
            let results: Vec<Tally> = (0..ps)
                .into_par_iter()
                .map(|d| {
                    let mut t = Tally::default();
                    let mut direct = Complex64::new(0.0, 0.0);
                    for &q in &squares {
                        direct += lut[(d * q % ps) as usize];
                    }
                    let closed = classical_gauss(d as i64, p, s).unwrap();
                    t.check(
                        (closed.to_complex() - direct).norm() < 1e-9 * (ps as f64),
                        || format!("closed form mismatch at p={p} s={s} d={d}"),
                    );
                    // Exact cyclotomic comparison for small moduli.
                    if ps <= 81 {
                        let mut dsum = CyclotomicInt::zero(ps as u32);
                        for &q in &squares {
                            dsum.add_root(d * q % ps, 1);
                        }
                        match closed_gauss_cyclotomic(d, p, s) {
                            Some(c) => t.check(dsum == c, || {
                                format!("exact closed form mismatch at p={p} s={s} d={d}")
                            }),
                            None => t.check(false, || {
                                format!("no exact closed form at p={p} s={s} d={d}")
                            }),
                        }
                    }
                    t
                })
                .collect();
            sums += ps;
            for t in results {
                tally.merge(t);
            }
        }
    }
    finish(
        4,
        "classical Gauss formulas",
        start,
        tally,
        format!("p in {{3,5,7}}, s <= {s_max}, {sums} quadratic sums (exact comparison for p^s <= 81)"),
    )
}

/// The closed form p^{(s+t)/2} eps_{p^{s-t}} (d'/p)^{s-t} as an exact
/// element of Z[zeta_{p^s}], using sqrt(p) = g_p / eps_p.
fn closed_gauss_cyclotomic(d: u64, p: u64, s: u32) -> Option<CyclotomicInt> {
    let ps = p.pow(s);
    let conductor = ps as u32;
    let g = classical_gauss(d as i64, p, s).ok()?;
    let t = g.t;
    let int_part = p.pow((g.half_power) / 2);
    if g.half_power % 2 == 0 {
        // Integer times a fourth root (which must be +-1 here).
        let sign = match g.unit {
            AlgebraicUnit::EighthRoot(0) => 1,
            AlgebraicUnit::EighthRoot(4) => -1,
            _ => return None,
        };
        return Some(CyclotomicInt::from_integer(conductor, sign * int_part as i64));
    }
    // Odd half power: value = p^{(s+t-1)/2} (d'/p)^{s-t} * [eps_{p^{s-t}} sqrt(p)],
    // and eps_{p^{s-t}} sqrt(p) = g_p (the quadratic Gauss sum mod p) when
    // s - t is odd.
    debug_assert!((s - t) % 2 == 1);
    let dp = (d / p.pow(t)) % p;
    let leg = legendre(dp as i64, p).ok()?;
    let sign = if (s - t) % 2 == 1 && leg == -1 { -1 } else { 1 };
    let mut gp = CyclotomicInt::zero(conductor);
    let step = ps / p;
    for j in 0..p {
        gp.add_root(j * j % p * step, 1);
    }
    Some(gp.scale(sign * int_part as i64))
}

// ---------------------------------------------------------------------
// Suite 5: tau / lens consistency.
// ---------------------------------------------------------------------

fn tau_lens_corpus(level: Level) -> Vec<TYData> {
    let (exhaustive_max, sample_count, sample_max) = match level {
        Level::Quick => (8u64, 4usize, 30u64),
        Level::Full => (9, 20, 100),
    };
    let mut corpus = Vec::new();
    for n in 1..=exhaustive_max {
        for factors in groups_of_order(n) {
            let group = FiniteAbelianGroup::new(&factors).unwrap();
            for chi in crate::form::enumerate_bicharacters(&group).unwrap() {
                for nu in [1i8, -1] {
                    corpus.push(TYData::new(chi.clone(), nu).unwrap());
                }
            }
        }
    }
    let mut rng = SplitMix64::new(0x5ca1_ab1e);
    for _ in 0..sample_count {
        let order = exhaustive_max + 1 + rng.below(sample_max - exhaustive_max);
        let lists = groups_of_order(order);
        let factors = lists[rng.below(lists.len() as u64) as usize].clone();
        let group = FiniteAbelianGroup::new(&factors).unwrap();
        let ctx = GroupCtx::new(&group);
        if let Some(gram) = random_nondegenerate_gram(&ctx, &mut rng) {
            let dense = DenseForm::new(&ctx, gram);
            let chi = Bicharacter::new(SymmetricForm::from_dense(&ctx, &dense)).unwrap();
            for nu in [1i8, -1] {
                corpus.push(TYData::new(chi.clone(), nu).unwrap());
            }
        }
    }
    corpus
}

fn suite_tau_lens(level: Level) -> SuiteResult {
    let start = Instant::now();
    let k_max = match level {
        Level::Quick => 20u64,
        Level::Full => 40,
    };
    let corpus = tau_lens_corpus(level);
    let categories = corpus.len();
    let results: Vec<Tally> = corpus
        .par_iter()
        .map(|data| {
            let mut t = Tally::default();
            let n = data.n();
            let four_n_sq = Rational::from_int((4 * n * n) as i64);
            // Global dimension from the catalog, exact.
            match global_dim_center(data) {
                Ok(d) => t.check(d == 4 * n * n, || format!("global dim {d} != 4n^2")),
                Err(e) => t.check(false, || format!("global dim failed: {e}")),
            }
            for k in 0..=k_max {
                let direct = match tau_k_direct(data, k) {
                    Ok(c) => c,
                    Err(e) => {
                        t.check(false, || format!("tau direct failed at k={k}: {e}"));
                        continue;
                    }
                };
                let closed = match tau_k_closed(data, k) {
                    Ok(c) => c,
                    Err(e) => {
                        t.check(false, || format!("tau closed failed at k={k}: {e}"));
                        continue;
                    }
                };
                let dz = direct.to_complex();
                let cz = closed.to_complex();
                t.check((dz - cz).norm() < 1e-9, || {
                    format!(
                        "tau direct {dz} != closed {cz} at k={k} on TY({}; nu={})",
                        data.chi(),
                        data.nu()
                    )
                });
                // Exact symbolic comparison of the two tau routes.
                match tau_k_closed_cyclotomic(data, k) {
                    Ok(closed_cyc) => {
                        t.check(closed_cyc == direct, || {
                            format!(
                                "exact tau mismatch at k={k} on TY({}; nu={})",
                                data.chi(),
                                data.nu()
                            )
                        });
                    }
                    Err(e) => t.check(false, || format!("closed cyclotomic failed at k={k}: {e}")),
                }
                let lens = match lens_invariant(data, k) {
                    Ok(v) => v,
                    Err(e) => {
                        t.check(false, || format!("lens failed at k={k}: {e}"));
                        continue;
                    }
                };
                // lens * (2n)^2 must reproduce the independent direct route.
                let scaled = lens.scale(four_n_sq);
                t.check((scaled.to_complex() - dz).norm() < 1e-9, || {
                    format!(
                        "lens * (2n)^2 = {} != tau direct {dz} at k={k} on TY({}; nu={})",
                        scaled.to_complex(),
                        data.chi(),
                        data.nu()
                    )
                });
            }
            // Fixed points, exact.
            t.check(
                lens_invariant(data, 0).unwrap() == LensInvariant::rational(Rational::ONE),
                || format!("|L_0| != 1 on TY({}; nu={})", data.chi(), data.nu()),
            );
            t.check(
                lens_invariant(data, 1).unwrap()
                    == LensInvariant::rational(Rational::new(1, 2 * n)),
                || format!("|L_1| != 1/(2n) on TY({}; nu={})", data.chi(), data.nu()),
            );
            t
        })
        .collect();
    let mut tally = Tally::default();
    for t in results {
        tally.merge(t);
    }
    // Census / global dimension for larger orders (one standard form each).
    let max_census = match level {
        Level::Quick => 60,
        Level::Full => 500,
    };
    let mut rng = SplitMix64::new(0xd1a6_05a1_u64);
    let mut census_orders: Vec<u64> = (1..=40.min(max_census)).collect();
    for _ in 0..12 {
        census_orders.push(1 + rng.below(max_census));
    }
    for order in census_orders {
        let factors = groups_of_order(order).remove(0);
        let group = FiniteAbelianGroup::new(&factors).unwrap();
        let rows: Vec<Vec<crate::phase::PhaseQZ>> = (0..group.rank())
            .map(|i| {
                (0..group.rank())
                    .map(|j| {
                        if i == j {
                            crate::phase::PhaseQZ::new(1, group.factors()[i])
                        } else {
                            crate::phase::PhaseQZ::ZERO
                        }
                    })
                    .collect()
            })
            .collect();
        let chi = Bicharacter::new(SymmetricForm::new(group.clone(), rows).unwrap()).unwrap();
        let data = TYData::new(chi, 1).unwrap();
        let n = group.order();
        match global_dim_center(&data) {
            Ok(d) => tally.check(d == 4 * n * n, || format!("global dim at order {n}")),
            Err(e) => tally.check(false, || format!("global dim at order {n} failed: {e}")),
        }
    }
    finish(
        5,
        "tau / lens-invariant consistency",
        start,
        tally,
        format!("{categories} categories, k <= {k_max}, exact + 1e-9 numeric"),
    )
}

// ---------------------------------------------------------------------
// Suite 6: pentagon and duality, with negative controls.
// ---------------------------------------------------------------------

fn suite_structural(level: Level) -> SuiteResult {
    let start = Instant::now();
    let max_order = match level {
        Level::Quick => 4u64,
        Level::Full => 8,
    };
    let mut corpus = Vec::new();
    for n in 1..=max_order {
        for factors in groups_of_order(n) {
            let group = FiniteAbelianGroup::new(&factors).unwrap();
            for chi in crate::form::enumerate_bicharacters(&group).unwrap() {
                for nu in [1i8, -1] {
                    corpus.push(TYData::new(chi.clone(), nu).unwrap());
                }
            }
        }
    }
    let categories = corpus.len();
    let results: Vec<Tally> = corpus
        .par_iter()
        .map(|data| {
            let mut t = Tally::default();
            match verify_pentagon_perturbed(data, Perturbation::None, 16) {
                Ok(r) => t.check(r.passed(), || {
                    format!(
                        "pentagon failed on TY({}; nu={}): {}",
                        data.chi(),
                        data.nu(),
                        r.failures.first().cloned().unwrap_or_default()
                    )
                }),
                Err(e) => t.check(false, || format!("pentagon sweep error: {e}")),
            }
            match verify_duality_perturbed(data, Perturbation::None, 16) {
                Ok(r) => t.check(r.passed(), || {
                    format!(
                        "duality failed on TY({}; nu={}): {}",
                        data.chi(),
                        data.nu(),
                        r.failures.first().cloned().unwrap_or_default()
                    )
                }),
                Err(e) => t.check(false, || format!("duality sweep error: {e}")),
            }
            t
        })
        .collect();
    let mut tally = Tally::default();
    for t in results {
        tally.merge(t);
    }
    // Negative controls: every deliberate corruption must be detected.
    let g3 = FiniteAbelianGroup::new(&[3]).unwrap();
    let chi3 = Bicharacter::new(
        SymmetricForm::new(
            g3.clone(),
            vec![vec![crate::phase::PhaseQZ::new(1, 3)]],
        )
        .unwrap(),
    )
    .unwrap();
    let control = TYData::new(chi3, 1).unwrap();
    let controls: Vec<(&str, bool)> = vec![
        (
            "non-bilinear pairing table",
            !verify_pentagon_perturbed(&control, Perturbation::FlipPairing { a: 1, b: 1 }, 16)
                .unwrap()
                .passed(),
        ),
        (
            "scaled m,m,m associator",
            !verify_pentagon_perturbed(&control, Perturbation::ScaleMmm(2.0), 16)
                .unwrap()
                .passed(),
        ),
        (
            "degenerate pairing table",
            !verify_pentagon_raw_table(&FiniteAbelianGroup::new(&[2]).unwrap(), vec![0; 4], 1)
                .passed(),
        ),
        (
            "scaled left duality projection",
            !verify_duality_perturbed(&control, Perturbation::ScaleLeftProjection(2.0), 16)
                .unwrap()
                .passed(),
        ),
        (
            "sign-flipped right duality inclusion",
            !verify_duality_perturbed(&control, Perturbation::ScaleRightInclusion(-1.0), 16)
                .unwrap()
                .passed(),
        ),
    ];
    let n_controls = controls.len();
    for (name, detected) in controls {
        tally.check(detected, || format!("negative control not detected: {name}"));
    }
    finish(
        6,
        "pentagon + duality verification",
        start,
        tally,
        format!("{categories} categories with |A| <= {max_order}, {n_controls} negative controls"),
    )
}

// ---------------------------------------------------------------------
// Suite 7: classification soundness.
// ---------------------------------------------------------------------

fn suite_classification(level: Level) -> SuiteResult {
    let start = Instant::now();
    let max_order = match level {
        Level::Quick => 27u64,
        Level::Full => 125,
    };
    let mut tally = Tally::default();
    let mut forms_total = 0u64;
    // key -> (representative, member count)
    let mut buckets: std::collections::BTreeMap<String, (Bicharacter, u64)> =
        std::collections::BTreeMap::new();
    let mut witness_failures = 0u64;

    for n in (1..=max_order).step_by(2) {
        for factors in groups_of_order(n) {
            let group = FiniteAbelianGroup::new(&factors).unwrap();
            let ctx = GroupCtx::new(&group);
            let grams: Vec<Vec<u32>> = GramCandidates::new(&ctx).collect();
            // Per-form work in parallel: invariants + split soundness.
            let per_form: Vec<Option<(String, Bicharacter, Tally)>> = grams
                .into_par_iter()
                .map(|gram| classification_check_form(&ctx, gram))
                .collect();
            for item in per_form.into_iter().flatten() {
                let (key, chi, t) = item;
                forms_total += 1;
                tally.merge(t);
                match buckets.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert((chi, 0));
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        // Equal invariants must imply brute-force isomorphic.
                        let (rep, count) = o.get_mut();
                        *count += 1;
                        match classify::find_isomorphism(&chi, rep, max_order.max(250)) {
                            Ok(Some(_)) => {}
                            Ok(None) => {
                                witness_failures += 1;
                                tally.check(false, || {
                                    format!("equal invariants, no isomorphism: {chi} vs {rep}")
                                });
                            }
                            Err(e) => tally.check(false, || format!("witness search failed: {e}")),
                        }
                        tally.checks += 1;
                    }
                }
            }
        }
    }
    // Distinct invariants must imply non-isomorphic (representatives).
    let reps: Vec<&(Bicharacter, u64)> = buckets.values().collect();
    let cross: Vec<Tally> = (0..reps.len())
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::default();
            for j in (i + 1)..reps.len() {
                if reps[i].0.group().order() != reps[j].0.group().order() {
                    continue;
                }
                match classify::is_isomorphic_bruteforce(&reps[i].0, &reps[j].0) {
                    Ok(iso) => t.check(!iso, || {
                        format!(
                            "distinct invariants but isomorphic: {} vs {}",
                            reps[i].0, reps[j].0
                        )
                    }),
                    Err(e) => t.check(false, || format!("cross check failed: {e}")),
                }
            }
            t
        })
        .collect();
    for t in cross {
        tally.merge(t);
    }
    // Additivity of ranks / multiplicativity of signs under orthogonal sum.
    let mut rng = SplitMix64::new(0xadd_517e);
    for _ in 0..16 {
        let pick = |rng: &mut SplitMix64| -> Bicharacter {
            let odd_orders = [3u64, 5, 9, 7, 25, 27];
            let n = odd_orders[rng.below(odd_orders.len() as u64) as usize];
            let lists = groups_of_order(n);
            let factors = lists[rng.below(lists.len() as u64) as usize].clone();
            let group = FiniteAbelianGroup::new(&factors).unwrap();
            let ctx = GroupCtx::new(&group);
            let gram = random_nondegenerate_gram(&ctx, rng).unwrap();
            let dense = DenseForm::new(&ctx, gram);
            Bicharacter::new(SymmetricForm::from_dense(&ctx, &dense)).unwrap()
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let sum = Bicharacter::new(a.form().orthogonal_sum(b.form())).unwrap();
        let wa = classify::wall_invariants(&a).unwrap();
        let wb = classify::wall_invariants(&b).unwrap();
        let ws = classify::wall_invariants(&sum).unwrap();
        let mut expected = wa.entries.clone();
        for (key, inv) in wb.entries {
            let e = expected
                .entry(key)
                .or_insert(classify::LevelInvariant { r: 0, sigma: 1 });
            e.r += inv.r;
            e.sigma *= inv.sigma;
        }
        tally.check(ws.entries == expected, || {
            format!("wall invariants not additive/multiplicative for {a} (+) {b}")
        });
    }
    finish(
        7,
        "classification vs brute-force oracle",
        start,
        tally,
        format!(
            "{forms_total} forms on odd orders <= {max_order}, {} classes, {witness_failures} witness failures",
            buckets.len()
        ),
    )
}

/// Invariants, split soundness, and reconstruction for one form.
fn classification_check_form(
    ctx: &GroupCtx,
    gram: Vec<u32>,
) -> Option<(String, Bicharacter, Tally)> {
    let dense = DenseForm::new(ctx, gram);
    if !dense.is_nondegenerate(ctx) {
        return None;
    }
    let mut t = Tally::default();
    let chi = Bicharacter::new(SymmetricForm::from_dense(ctx, &dense))
        .expect("dense nondegeneracy agrees");
    let w = match classify::wall_invariants(&chi) {
        Ok(w) => w,
        Err(e) => {
            t.check(false, || format!("wall invariants failed on {chi}: {e}"));
            return Some((String::new(), chi, t));
        }
    };
    let mut key = String::new();
    for ((p, s), inv) in &w.entries {
        key.push_str(&format!("{p}^{s}:{},{};", inv.r, inv.sigma));
    }
    // Splitting soundness: reconstruct a block form per odd prime part and
    // compare with the input by brute force.
    let mut reconstructed: Option<SymmetricForm> = None;
    for (p, _) in factorize(ctx.group.order()) {
        let comp = crate::group::primary_component(&ctx.group, p);
        let restricted = chi
            .form()
            .restrict(&comp.subgroup, &comp.embedding)
            .and_then(Bicharacter::new);
        let split = restricted.and_then(|r| classify::orthogonal_split_odd_p(&r));
        match split {
            Ok(split) => {
                let block = split.block_form();
                reconstructed = Some(match reconstructed {
                    None => block,
                    Some(prev) => prev.orthogonal_sum(&block),
                });
            }
            Err(e) => {
                t.check(false, || format!("split failed on {chi} at p={p}: {e}"));
                return Some((key, chi, t));
            }
        }
    }
    if let Some(rec) = reconstructed {
        match Bicharacter::new(rec) {
            Ok(rec) => match classify::is_isomorphic_bruteforce(&chi, &rec) {
                Ok(iso) => t.check(iso, || {
                    format!("split reconstruction {rec} not isomorphic to {chi}")
                }),
                Err(e) => t.check(false, || format!("reconstruction check failed: {e}")),
            },
            Err(e) => t.check(false, || format!("reconstructed form degenerate: {e}")),
        }
    }
    Some((key, chi, t))
}

// ---------------------------------------------------------------------
// Suite 8: the separation experiment.
// ---------------------------------------------------------------------

fn suite_distinguish(level: Level) -> SuiteResult {
    let start = Instant::now();
    let max_order = match level {
        Level::Quick => 9u64,
        Level::Full => 81,
    };
    let mut tally = Tally::default();
    let config = ExperimentConfig::new(max_order);
    let detail;
    match distinguish::run(&config) {
        Ok(report) => {
            tally.check(report.unseparated == 0, || {
                format!("{} UNSEPARATED pairs", report.unseparated)
            });
            tally.check(report.member_agreement_failures == 0, || {
                format!(
                    "{} isomorphic pairs with diverging lens sequences",
                    report.member_agreement_failures
                )
            });
            // Determinism: a re-run reproduces the report exactly.
            match distinguish::run(&config) {
                Ok(second) => tally.check(second == report, || {
                    "re-run did not reproduce the report".into()
                }),
                Err(e) => tally.check(false, || format!("re-run failed: {e}")),
            }
            detail = format!(
                "odd orders <= {max_order}, k_max = {}, {} categories ({} raw), max separating k = {}",
                report.k_max,
                report.categories.len(),
                report.raw_categories,
                report.max_separating_k
            );
        }
        Err(e) => {
            tally.check(false, || format!("experiment failed: {e}"));
            detail = "experiment failed".into();
        }
    }
    finish(8, "lens-space separation experiment", start, tally, detail)
}

// ---------------------------------------------------------------------
// Suite 9: Frobenius-Schur indicators.
// ---------------------------------------------------------------------

fn suite_fs_indicator(level: Level) -> SuiteResult {
    let start = Instant::now();
    let k_max = match level {
        Level::Quick => 16u64,
        Level::Full => 50,
    };
    let corpus = tau_lens_corpus(level);
    let categories = corpus.len();
    let results: Vec<Tally> = corpus
        .par_iter()
        .map(|data| {
            let mut t = Tally::default();
            for k in 1..=k_max {
                let fs = match fs_indicator(data, k) {
                    Ok(f) => f,
                    Err(e) => {
                        t.check(false, || format!("indicator failed at k={k}: {e}"));
                        continue;
                    }
                };
                // |A_k|^{-1/2} nu_{2k}(m) is exactly zero or an eighth root.
                t.check(fs.unit.is_snapped(), || {
                    format!(
                        "scaled indicator unsnapped at k={k} on TY({}; nu={})",
                        data.chi(),
                        data.nu()
                    )
                });
                // Independent reproduction through the center catalog.
                match fs_indicator_center_sum(data, k) {
                    Ok(via_center) => {
                        t.check((fs.to_complex() - via_center).norm() < 1e-9, || {
                            format!(
                                "indicator {} != center sum {via_center} at k={k} on TY({}; nu={})",
                                fs.to_complex(),
                                data.chi(),
                                data.nu()
                            )
                        });
                    }
                    Err(e) => t.check(false, || format!("center sum failed at k={k}: {e}")),
                }
            }
            t
        })
        .collect();
    let mut tally = Tally::default();
    for t in results {
        tally.merge(t);
    }
    finish(
        9,
        "Frobenius-Schur indicators",
        start,
        tally,
        format!("{categories} categories, k <= {k_max}"),
    )
}
