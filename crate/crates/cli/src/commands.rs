//! Subcommand handlers. Each returns records for the report; I/O errors and
//! library errors propagate to `run_command`, which maps them to exit codes.

use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symfam::arith::{self, DEFAULT_SEARCH_BUDGET};
use symfam::bounds::{self, BoundReport, Lemma22Outcome, Provenance};
use symfam::family::io::{read_family, FamilyDocument};
use symfam::family::{superset_extension, tensor_product, translates_family};
use symfam::geometry;
use symfam::oracle::{self, DEFAULT_CLIQUE_BUDGET};
use symfam::runs::{self, LowerBoundChain, RunCountMode, RunCountReport};
use symfam::symmetry::{
    automorphism_transitivity_search, average_intersection_identity, product_witness,
    verify_symmetric_witness, GroupWitness,
};
use symfam::{Error, SetFamily, SubsetMask};

use crate::args::*;
use crate::report::{big_value, Record, Table};
use crate::CliError;

/// What a handler produced.
#[derive(Default)]
pub struct Output {
    pub records: Vec<Record>,
    pub table: Option<Table>,
    /// A search stopped on its budget; reported with exit code 3.
    pub budget_exhausted: bool,
    /// Family document to print in text mode when no output file was given.
    pub document: Option<String>,
}

impl Output {
    fn one(r: Record) -> Self {
        Output {
            records: vec![r],
            ..Default::default()
        }
    }
}

type Res = Result<Output, CliError>;

fn residue_mask(n: usize, set: &[usize]) -> Result<SubsetMask, CliError> {
    if let Some(&bad) = set.iter().find(|&&x| x >= n) {
        return Err(CliError::Usage(format!("residue {bad} is not in Z_{n}")));
    }
    Ok(SubsetMask::from_zero_based(n, set.iter().copied())?)
}

fn emit_family(
    out: &mut Output,
    family: &SetFamily,
    witness: Option<&GroupWitness>,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let doc = FamilyDocument::from_family(family, witness).to_canonical_string();
    match path {
        Some(p) => {
            std::fs::write(p, &doc).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        None => out.document = Some(doc),
    }
    Ok(())
}

fn family_record(name: &str, f: &SetFamily) -> Record {
    Record::new(name)
        .exact("n", f.n())
        .exact("k", f.k())
        .exact("members", f.len())
        .exact("intersecting", f.is_intersecting())
}

fn bound_record(r: &BoundReport) -> Record {
    let mut rec = Record::new(&format!("bound.{}", r.name));
    for (k, v) in &r.inputs {
        rec = rec.exact(k, *v);
    }
    for (k, v) in &r.free_constants {
        rec = rec.with(k, *v, Provenance::Formula);
    }
    rec = rec.with("value", r.value, r.provenance);
    if let Some(x) = &r.exact_value {
        rec = rec.rational("exact_value", x, r.provenance);
    }
    for (k, v) in &r.components {
        rec = rec.with(k, *v, r.provenance);
    }
    rec
}

pub fn family(cmd: FamilyCmd) -> Res {
    match cmd {
        FamilyCmd::Verify { input } => {
            let (f, w) = read_family(&input)?;
            let mut rec = family_record("family.verify", &f).exact("uniform", f.k().is_some());
            rec = match &w {
                Some(w) => {
                    let ok = verify_symmetric_witness(&f, w)?;
                    rec.exact("symmetric", ok).exact("symmetric_via", "witness")
                }
                None if verify_symmetric_witness(&f, &GroupWitness::rotations(f.n()))? => {
                    rec.exact("symmetric", true).exact("symmetric_via", "rotations")
                }
                None if f.n() <= symfam::symmetry::DEFAULT_SEARCH_CAP => {
                    let t = automorphism_transitivity_search(&f)?;
                    rec.exact("symmetric", t.transitive)
                        .exact("symmetric_via", "automorphism-search")
                }
                None => rec.exact("symmetric", "unknown").exact("symmetric_via", "none"),
            };
            Ok(Output::one(rec))
        }
        FamilyCmd::Build { kind, out } => {
            let (f, w) = build(kind)?;
            let mut o = Output::one(family_record("family.build", &f).exact(
                "witness_generators",
                w.as_ref().map(|w| w.generators().len()),
            ));
            emit_family(&mut o, &f, w.as_ref(), out.as_deref())?;
            Ok(o)
        }
    }
}

fn build(kind: BuildKind) -> Result<(SetFamily, Option<GroupWitness>), CliError> {
    Ok(match kind {
        BuildKind::Translates { n, set } => {
            let f = translates_family(&residue_mask(n, &set)?)?;
            (f, Some(GroupWitness::rotations(n)))
        }
        BuildKind::Runs { n, k } => {
            let (f, _) = runs::build_and_count_f(n, k)?;
            (f, Some(GroupWitness::rotations(n)))
        }
        BuildKind::Pg { r, q } => {
            let (f, w) = geometry::pg_flat_family_with_witness(r, q)?;
            (f, Some(w))
        }
        BuildKind::Da { r, q } => {
            let (f, w) = geometry::dual_affine_family_with_witness(r, q)?;
            (f, Some(w))
        }
        BuildKind::Singer { q } => {
            let d = geometry::singer_difference_set(q)?;
            let n = d.n();
            (translates_family(&d)?, Some(GroupWitness::rotations(n)))
        }
        BuildKind::Tensor { a, b } => {
            let (fa, wa) = read_family(&a)?;
            let (fb, wb) = read_family(&b)?;
            let f = tensor_product(&fa, &fb)?;
            let w = match (wa, wb) {
                (Some(wa), Some(wb)) => Some(product_witness(&wa, &wb)?),
                _ => None,
            };
            (f, w)
        }
        BuildKind::Extend { input, l } => {
            let (f, w) = read_family(&input)?;
            (superset_extension(&f, l)?, w)
        }
    })
}

pub fn runs_cmd(cmd: RunsCmd) -> Res {
    match cmd {
        RunsCmd::Count {
            n,
            k,
            method,
            budget,
        } => {
            let budget = budget.map(u128::from).unwrap_or(runs::DEFAULT_COUNT_BUDGET);
            let mut rec = Record::new("runs.count")
                .exact("n", n)
                .exact("k", k)
                .exact("nonempty_predicate", runs::nonempty_f_predicate(n, k))
                .exact("floor_square_bound", runs::floor_square_bound(n, k));
            let by_runs = match method {
                CountMethod::Sweep => None,
                _ => Some(runs::count_f_by_runs(n, k)?),
            };
            let swept = match method {
                CountMethod::Compositions => None,
                CountMethod::Sweep => Some(runs::count_f_enumerated(n, k, budget)?),
                CountMethod::Auto => runs::count_f_enumerated(n, k, budget).ok(),
            };
            if let Some(c) = &by_runs {
                rec = rec.big("count", c, Provenance::Exact).exact("method", "compositions");
            }
            if let Some(c) = swept {
                rec = rec.big("count_sweep", &BigUint::from(c), Provenance::Exact);
                if let Some(r) = &by_runs {
                    rec = rec.exact("methods_agree", *r == BigUint::from(c));
                } else {
                    rec = rec.big("count", &BigUint::from(c), Provenance::Exact).exact("method", "sweep");
                }
            }
            Ok(Output::one(rec))
        }
        RunsCmd::Build { n, k, out } => {
            let (f, c) = runs::build_and_count_f(n, k)?;
            let w = GroupWitness::rotations(n);
            let mut o = Output::one(
                family_record("runs.build", &f)
                    .big("count", &BigUint::from(c), Provenance::Exact)
                    .exact("symmetric", verify_symmetric_witness(&f, &w).unwrap_or(false) || f.is_empty()),
            );
            emit_family(&mut o, &f, Some(&w), out.as_deref())?;
            Ok(o)
        }
        RunsCmd::Bound { n, k } => {
            let chain = runs::constructive_lower_bound(n, k)?;
            let exact = runs::count_f_by_runs(n, k)?;
            let mut rec = Record::new("runs.bound")
                .exact("n", n)
                .exact("k", k)
                .big("exact_count", &exact, Provenance::Exact);
            match chain {
                LowerBoundChain::Applicable { l0, bound, report } => {
                    rec = rec
                        .exact("applicable", true)
                        .exact("l0", l0)
                        .rational("bound", &bound, Provenance::CertifiedBound)
                        .exact(
                            "bound_holds",
                            bound <= BigRational::from_integer(BigInt::from(exact)),
                        )
                        .with(
                            "exponent_factor",
                            report.components["exponent-factor"],
                            Provenance::Formula,
                        );
                }
                LowerBoundChain::Inapplicable { reason } => {
                    rec = rec.exact("applicable", false).exact("reason", reason);
                }
            }
            Ok(Output::one(rec))
        }
        RunsCmd::Constrained { n, k, l, mode } => {
            let mode = match mode {
                RunMode::ZeroRunAtLeast => RunCountMode::ZeroRunAtLeast,
                RunMode::NoRunOfLength => RunCountMode::NoRunOfLength,
            };
            let r = runs::count_run_constrained(n, k, l, mode)?;
            let mut rec = Record::new("runs.constrained")
                .exact("n", n)
                .exact("k", k)
                .exact("l", l)
                .big("exact", &BigUint::from(r.exact()), Provenance::Exact)
                .exact("consistent", r.consistent());
            rec = match &r {
                RunCountReport::ZeroRunAtLeast { bound, .. } => {
                    rec.big("bound", bound, Provenance::CertifiedBound)
                }
                RunCountReport::NoRunOfLength {
                    threshold,
                    guarantee_applies,
                    guarantee,
                    ..
                } => rec
                    .with("threshold", *threshold, Provenance::Exact)
                    .exact("guarantee_applies", *guarantee_applies)
                    .rational("guarantee", guarantee, Provenance::CertifiedBound),
            };
            Ok(Output::one(rec))
        }
    }
}

pub fn geom(cmd: GeomCmd) -> Res {
    match cmd {
        GeomCmd::PgFlats { r, q, out } => {
            let (f, w) = geometry::pg_flat_family_with_witness(r, q)?;
            geometry_output("geom.pg-flats", &f, &w, out.as_deref())
        }
        GeomCmd::DaFlats { r, q, out } => {
            let (f, w) = geometry::dual_affine_family_with_witness(r, q)?;
            geometry_output("geom.da-flats", &f, &w, out.as_deref())
        }
        GeomCmd::Singer { q, out } => {
            let d = geometry::singer_difference_set(q)?;
            let n = d.n();
            let fam = translates_family(&d)?;
            let mut o = Output::one(
                Record::new("geom.singer")
                    .exact("q", q)
                    .exact("n", n)
                    .exact("set", d.to_zero_based())
                    .exact("perfect", arith::is_perfect_difference_set(&d))
                    .exact("translates_intersecting", fam.is_intersecting()),
            );
            if out.is_some() {
                emit_family(&mut o, &fam, Some(&GroupWitness::rotations(n)), out.as_deref())?;
            }
            Ok(o)
        }
        GeomCmd::Maximal { family, budget } => {
            let (f, _) = read_family(&family)?;
            let budget = budget
                .map(u128::from)
                .unwrap_or(symfam::family::DEFAULT_MATERIALIZE_BUDGET);
            let m = geometry::is_maximal_intersecting_with_budget(&f, budget)?;
            Ok(Output::one(
                family_record("geom.maximal", &f).exact("maximal", m),
            ))
        }
        GeomCmd::Superset { q, k } => {
            let b = geometry::line_superset_bound(q, k)?;
            let mut rec = Record::new("geom.superset")
                .exact("q", q)
                .exact("k", k)
                .exact("n", b.n)
                .with("first", b.first.to_string(), Provenance::CertifiedBound)
                .rational(
                    "second",
                    &b.second,
                    if b.second_certified {
                        Provenance::CertifiedBound
                    } else {
                        Provenance::Formula
                    },
                )
                .exact("second_certified", b.second_certified);
            let lines = geometry::pg_flat_family(1, q)?;
            if let Ok(ext) = superset_extension(&lines, k as usize) {
                rec = rec.exact("exact", ext.len());
            }
            Ok(Output::one(rec))
        }
        GeomCmd::Gaussian { a, b, q } => Ok(Output::one(
            Record::new("geom.gaussian")
                .exact("a", a)
                .exact("b", b)
                .exact("q", q)
                .big("value", &geometry::gaussian_binomial(a, b, q), Provenance::Exact),
        )),
    }
}

fn geometry_output(name: &str, f: &SetFamily, w: &GroupWitness, out: Option<&Path>) -> Res {
    let mut o = Output::one(
        family_record(name, f)
            .exact("symmetric", verify_symmetric_witness(f, w)?)
            .exact("witness_generators", w.generators().len()),
    );
    if out.is_some() {
        emit_family(&mut o, f, Some(w), out)?;
    }
    Ok(o)
}

pub fn cover(cmd: CoverCmd) -> Res {
    match cmd {
        CoverCmd::Min {
            n,
            budget,
            progress,
        } => {
            let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
            let report = |nodes: u64| eprintln!("cover min {n}: {nodes} nodes");
            let r = arith::min_difference_cover_with_progress(
                n,
                budget,
                progress.then_some(&report as &(dyn Fn(u64) + Sync)),
            )?;
            let tag = if r.exhaustive {
                Provenance::Exact
            } else {
                Provenance::NonExhaustive
            };
            let rec = Record::new("cover.min")
                .exact("n", n)
                .with("h", r.h, tag)
                .exact("witness", r.witness.clone())
                .exact("exhaustive", r.exhaustive)
                .with("refuted_below", r.lower_bound, Provenance::Exact)
                .exact("nodes_explored", r.nodes_explored);
            Ok(Output {
                budget_exhausted: !r.exhaustive,
                ..Output::one(rec)
            })
        }
        CoverCmd::Verify { n, set } => {
            let s = residue_mask(n, &set)?;
            Ok(Output::one(
                Record::new("cover.verify")
                    .exact("n", n)
                    .exact("set", s.to_zero_based())
                    .exact("difference_cover", arith::is_difference_cover(&s, n)?),
            ))
        }
    }
}

pub fn sidon(cmd: SidonCmd) -> Res {
    match cmd {
        SidonCmd::Max { n, budget } => {
            let r = arith::sidon_max(n, budget.unwrap_or(DEFAULT_SEARCH_BUDGET))?;
            let tag = if r.exhaustive {
                Provenance::Exact
            } else {
                Provenance::NonExhaustive
            };
            Ok(Output {
                budget_exhausted: !r.exhaustive,
                ..Output::one(
                    Record::new("sidon.max")
                        .exact("n", n)
                        .with("size", r.size, tag)
                        .exact("witness", r.witness.clone())
                        .exact("exhaustive", r.exhaustive)
                        .exact("nodes_explored", r.nodes_explored),
                )
            })
        }
        SidonCmd::Verify { n, set } => {
            let s = residue_mask(n, &set)?;
            Ok(Output::one(
                Record::new("sidon.verify")
                    .exact("n", n)
                    .exact("set", s.to_zero_based())
                    .exact("sidon", arith::is_sidon(&s, n)?),
            ))
        }
    }
}

pub fn g_bounds(n: usize, budget: Option<u64>) -> Res {
    let g = arith::g_bounds_with_budget(n, budget.unwrap_or(DEFAULT_SEARCH_BUDGET))?;
    let mut rec = Record::new("g-bounds")
        .exact("n", n)
        .with("lower", g.lower, Provenance::CertifiedBound)
        .exact("lower_source", g.lower_source.clone())
        .with("upper", g.upper.value, g.upper.provenance)
        .exact("upper_source", g.upper.source.clone())
        .exact("exact", g.exact);
    for c in &g.candidates {
        rec = rec.with(&format!("candidate.{}", c.source), c.value, c.provenance);
    }
    Ok(Output {
        budget_exhausted: !g.cover.exhaustive,
        ..Output::one(rec)
    })
}

fn parse_fraction(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Usage(format!("not a fraction: {s}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: BigInt = a.parse().map_err(|_| bad())?;
    let b: BigInt = b.parse().map_err(|_| bad())?;
    if b.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

fn lemma_record(name: &str, f: &SetFamily, out: &Lemma22Outcome) -> Record {
    let rec = Record::new(name)
        .exact("n", f.n())
        .exact("k", f.k())
        .exact("members", f.len());
    match out {
        Lemma22Outcome::Inapplicable { p } => rec
            .exact("applicable", false)
            .with("p", *p, Provenance::Formula),
        Lemma22Outcome::Checked(c) => rec
            .exact("applicable", true)
            .rational("p", &c.p, Provenance::Exact)
            .rational("measure", &c.measure, Provenance::Exact)
            .rational("rhs", &c.rhs, Provenance::Exact)
            .rational("binomial_tail", &c.binomial_tail, Provenance::Exact)
            .exact("holds", c.holds),
    }
}

/// A uniform family with `n` in `4..=n_max`, a `k` for which the bias
/// `friedgut_p(n, k, 1/2)` stays below 1, and between 1 and 40 distinct
/// random members.
pub fn random_uniform_family(rng: &mut ChaCha8Rng, n_max: usize) -> SetFamily {
    let n = rng.gen_range(4..=n_max.max(4));
    let ks: Vec<usize> = (1..=n)
        .filter(|&k| bounds::friedgut_p(n as u64, k as u64, 0.5) < 1.0)
        .collect();
    let k = ks[rng.gen_range(0..ks.len())];
    let layer = symfam::combinatorics::binomial_u128(n as u64, k as u64).unwrap() as usize;
    let want = rng.gen_range(1..=layer.min(40));
    let mut members = std::collections::BTreeSet::new();
    while members.len() < want {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut s = Vec::with_capacity(k);
        for _ in 0..k {
            let i = rng.gen_range(0..pool.len());
            s.push(pool.swap_remove(i));
        }
        members.insert(SubsetMask::from_zero_based(n, s).expect("in range"));
    }
    SetFamily::uniform(n, k, members).expect("uniform by construction")
}

pub fn bounds_cmd(cmd: BoundsCmd, seed: u64) -> Res {
    match cmd {
        BoundsCmd::Main {
            n,
            k,
            c,
            trace,
            c0,
            density,
        } => {
            let r = bounds::thm_main_bound(n, k, c)?;
            let mut o = Output::one(bound_record(&r));
            if trace {
                let (Some(c0), Some(d)) = (c0, density) else {
                    return Err(CliError::Usage("--trace needs --c0 and --density".into()));
                };
                let mut rec = Record::new("bound.trace").with("c0", c0, Provenance::Formula);
                for s in bounds::main_bound_trace(n, k, c0, d)? {
                    rec = rec.with(&s.label, s.value, Provenance::Formula);
                }
                o.records.push(rec);
            }
            Ok(o)
        }
        BoundsCmd::Fk { p, eps, c0, n } => {
            if !(p > 0.0 && p < 1.0 && eps > 0.0 && eps < 1.0 && c0 > 0.0) {
                return Err(CliError::Usage("need 0 < p, eps < 1 and c0 > 0".into()));
            }
            Ok(Output::one(
                Record::new("bound.fk-threshold")
                    .exact("p", p)
                    .exact("eps", eps)
                    .exact("n", n)
                    .with("c0", c0, Provenance::Formula)
                    .with("q", bounds::fk_threshold_q(p, eps, c0, n), Provenance::Formula),
            ))
        }
        BoundsCmd::Regime { n, k, delta } => {
            Ok(Output::one(bound_record(&bounds::regime_report(n, k, delta)?)))
        }
        BoundsCmd::Friedgut { n, k, phi } => {
            if !(phi > 0.0 && phi < 1.0) || k > n {
                return Err(CliError::Usage("need 0 < phi < 1 and k <= n".into()));
            }
            Ok(Output::one(
                Record::new("bound.friedgut-p")
                    .exact("n", n)
                    .exact("k", k)
                    .exact("phi", phi)
                    .with("p", bounds::friedgut_p(n, k, phi), Provenance::Exact),
            ))
        }
        BoundsCmd::RunLower { n, k, c1, big_c } => Ok(Output::one(bound_record(
            &bounds::run_family_lower_formula(n, k, c1, big_c)?,
        ))),
        BoundsCmd::Lemma22 { input, phi } => {
            let (f, _) = read_family(&input)?;
            let phi = parse_fraction(&phi)?;
            let out = bounds::verify_lemma22(&f, &phi)?;
            Ok(Output::one(lemma_record("bound.lemma22", &f, &out)))
        }
        BoundsCmd::Lemma22Sweep { trials, n_max } => {
            if n_max < 4 {
                return Err(CliError::Usage("n-max must be at least 4".into()));
            }
            if n_max > symfam::family::measure::DEFAULT_MEASURE_CAP {
                return Err(CliError::Usage(format!(
                    "n-max above {} is out of reach of the exact measure",
                    symfam::family::measure::DEFAULT_MEASURE_CAP
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phi = BigRational::new(1.into(), 2.into());
            let (mut checked, mut held, mut inapplicable) = (0usize, 0usize, 0usize);
            for _ in 0..trials {
                let f = random_uniform_family(&mut rng, n_max);
                match bounds::verify_lemma22(&f, &phi)? {
                    Lemma22Outcome::Inapplicable { .. } => inapplicable += 1,
                    Lemma22Outcome::Checked(c) => {
                        checked += 1;
                        held += usize::from(c.holds);
                    }
                }
            }
            Ok(Output::one(
                Record::new("bound.lemma22-sweep")
                    .exact("seed", seed)
                    .exact("trials", trials)
                    .exact("checked", checked)
                    .exact("held", held)
                    .exact("inapplicable", inapplicable)
                    .exact("all_held", held == checked),
            ))
        }
        BoundsCmd::Averaging { n, k, set } => {
            if k > n || n == 0 {
                return Err(CliError::Usage("need k <= n and n >= 1".into()));
            }
            let x = match set {
                Some(s) => residue_mask(n, &s)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut pool: Vec<usize> = (0..n).collect();
                    let s: Vec<usize> = (0..k)
                        .map(|_| pool.swap_remove(rng.gen_range(0..pool.len())))
                        .collect();
                    SubsetMask::from_zero_based(n, s)?
                }
            };
            let avg = average_intersection_identity(&x, &GroupWitness::rotations(n))?;
            let kk = x.len() as u64;
            let expected = BigRational::new((kk * kk).into(), (n as u64).into());
            Ok(Output::one(
                Record::new("bound.averaging")
                    .exact("n", n)
                    .exact("set", x.to_zero_based())
                    .rational("average", &avg, Provenance::Exact)
                    .rational("k_squared_over_n", &expected, Provenance::Exact)
                    .exact("equal", avg == expected),
            ))
        }
    }
}

pub fn oracle_cmd(cmd: OracleCmd) -> Res {
    match cmd {
        OracleCmd::SCyclic {
            n,
            k,
            witness,
            budget,
        } => {
            let r = oracle::s_cyclic_with_budget(n, k, budget.unwrap_or(DEFAULT_CLIQUE_BUDGET))?;
            let tag = if r.exhaustive {
                Provenance::Exact
            } else {
                Provenance::NonExhaustive
            };
            let mut rec = Record::new("oracle.s-cyclic")
                .exact("n", n)
                .exact("k", k)
                .with("value", big_value(&r.value), tag)
                .exact("exact_flag", r.exhaustive)
                .exact("exact_for_all_symmetric", r.exact_for_all_symmetric)
                .exact("orbits", r.orbits.len())
                .exact("nodes_explored", r.nodes_explored);
            let mut o = Output::default();
            if let Some(w) = &r.witness {
                let rot = GroupWitness::rotations(n);
                rec = rec
                    .exact("witness_intersecting", w.is_intersecting())
                    .exact(
                        "witness_symmetric",
                        w.is_empty() || verify_symmetric_witness(w, &rot)?,
                    );
                if witness.is_some() {
                    emit_family(&mut o, w, Some(&rot), witness.as_deref())?;
                }
            }
            o.records.push(rec);
            o.budget_exhausted = !r.exhaustive;
            Ok(o)
        }
        OracleCmd::Table { nmax, budget } => {
            let budget = budget.unwrap_or(DEFAULT_CLIQUE_BUDGET);
            let mut rows = Vec::new();
            for n in 1..=nmax {
                for k in 1..=n {
                    let row = match oracle::s_cyclic_with_budget(n, k, budget) {
                        Ok(r) => vec![
                            n.to_string(),
                            k.to_string(),
                            r.value.to_string(),
                            r.exhaustive.to_string(),
                        ],
                        Err(e) => vec![n.to_string(), k.to_string(), cell_error(&e), "false".into()],
                    };
                    rows.push(row);
                }
            }
            Ok(Output {
                table: Some(Table {
                    header: ["n", "k", "s_cyclic", "exact_flag"].map(String::from).to_vec(),
                    rows,
                }),
                ..Default::default()
            })
        }
    }
}

pub fn cell_error(e: &Error) -> String {
    match e {
        Error::BudgetExceeded { .. } | Error::Capacity { .. } | Error::MeasureCapExceeded { .. } => {
            "budget-exceeded".into()
        }
        _ => "error".into(),
    }
}

/// Size of an algebraic construction of `k`-sets on exactly `n` points.
pub fn geometric_size(n: usize, k: usize) -> Option<(u64, String)> {
    let (n, k) = (n as u64, k as u64);
    let mut best: Option<(u64, String)> = None;
    let mut q = 2u64;
    while q * q < n {
        if geometry::prime_power(q).is_some() {
            for r in 1u32..8 {
                let qs = |e: u32| q.checked_pow(e).map(|x| (x - 1) / (q - 1));
                let (Some(pts), Some(da), Some(kk)) =
                    (qs(2 * r + 1), qs(2 * r).map(|x| x * q), qs(r + 1))
                else {
                    break;
                };
                if da > n {
                    break;
                }
                if kk != k {
                    continue;
                }
                let g = |a: u64, b: u64| geometry::gaussian_binomial(a, b, q).to_u64();
                if pts == n {
                    if let Some(size) = g(2 * r as u64 + 1, r as u64 + 1) {
                        if best.as_ref().is_none_or(|b| size > b.0) {
                            best = Some((size, format!("PG({},{q})", 2 * r)));
                        }
                    }
                }
                if da == n {
                    // (r-1)-flats of AG(2r,q)
                    let size = g(2 * r as u64, r as u64 - 1)
                        .and_then(|x| x.checked_mul(q.checked_pow(r + 1)?));
                    if let Some(size) = size {
                        if best.as_ref().is_none_or(|b| size > b.0) {
                            best = Some((size, format!("DA({},{q})", 2 * r)));
                        }
                    }
                }
            }
        }
        q += 1;
    }
    best
}

pub fn compare(a: CompareArgs) -> Res {
    if a.n_min > a.n_max || a.n_min == 0 {
        return Err(CliError::Usage("need 1 <= n-min <= n-max".into()));
    }
    let budget = a.budget.unwrap_or(DEFAULT_CLIQUE_BUDGET);
    let header = [
        "n",
        "k",
        "run_family",
        "run_family_tag",
        "s_cyclic",
        "s_cyclic_tag",
        "geometric",
        "geometric_tag",
        "main_bound",
        "main_bound_tag",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for n in a.n_min..=a.n_max {
        if a.primes_only && !symfam::geometry::field::is_prime(n as u64) {
            continue;
        }
        let k_max = a.k_max.unwrap_or(n / 2).min(n);
        for k in a.k_min.max(1)..=k_max {
            let (f, f_tag) = match runs::count_f_by_runs(n, k) {
                Ok(c) => (c.to_string(), Provenance::Exact.tag().to_string()),
                Err(e) => (cell_error(&e), "none".into()),
            };
            let (s, s_tag) = match oracle::s_cyclic_with_budget(n, k, budget) {
                Ok(r) if r.exhaustive => (r.value.to_string(), Provenance::Exact.tag().to_string()),
                Ok(r) => (r.value.to_string(), Provenance::NonExhaustive.tag().to_string()),
                Err(e) => (cell_error(&e), "none".into()),
            };
            let (g, g_tag) = match geometric_size(n, k) {
                Some((size, _)) => (size.to_string(), Provenance::Exact.tag().to_string()),
                None => ("na".into(), "none".into()),
            };
            let (m, m_tag) = match a.c.map(|c| bounds::thm_main_bound(n as u64, k as u64, c)) {
                Some(Ok(r)) => (format!("{:.6e}", r.value), r.provenance.tag().to_string()),
                Some(Err(_)) | None => ("na".into(), "none".into()),
            };
            rows.push(vec![n.to_string(), k.to_string(), f, f_tag, s, s_tag, g, g_tag, m, m_tag]);
        }
    }
    Ok(Output {
        table: Some(Table { header, rows }),
        ..Default::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sizes() {
        assert_eq!(geometric_size(7, 3).unwrap().0, 7);
        assert_eq!(geometric_size(13, 4).unwrap().0, 13);
        assert_eq!(geometric_size(12, 4).unwrap().0, 9);
        assert_eq!(geometric_size(31, 7).unwrap().0, 155);
        assert_eq!(geometric_size(30, 7).unwrap().0, 120);
        assert!(geometric_size(11, 3).is_none());
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }
}
