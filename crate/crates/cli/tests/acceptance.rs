//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs as a plain binary so the report always reaches the terminal.

#[path = "../../core/tests/support/mod.rs"]
mod support;
mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sigma_cat::elements::{
    category_of_elements, check_discrete_fibration, lifted_presheaf, pi_presheaf, product_set, product_set_indices,
    second_projection, yoneda_slice_witness,
};
use sigma_cat::fincat::{check_strict_inverse_pair, enumerate_functors, functor_category};
use sigma_cat::grothendieck::{
    cat_product_set, check_cleavage, check_split_fibration, constant_cat_presheaf, find_associates, grothendieck,
    is_fibration, product_category_pi, restrict_to_objects, sigma_cr, sigma_dr,
};
use sigma_cat::testkit::{gen_cat_presheaf, gen_q_over_elements, gen_set_presheaf, mix, GenParams};
use sigma_cat::theorems::{check_commutativity, check_theorem_ac, check_theorem_assoc, sigma_pq};
use sigma_cat::{FinCategory, Limits, ValidationReport};
use support::*;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

/// Runs `f` on every seed in parallel; reports the first failures in seed
/// order, or the total number of sub-checks.
fn over_seeds(n: u64, f: impl Fn(u64) -> Result<usize, String> + Sync) -> Check {
    let results: Vec<Result<usize, String>> = (0..n).into_par_iter().map(&f).collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    if failures.is_empty() {
        let checks: usize = results.iter().map(|r| *r.as_ref().unwrap()).sum();
        Ok(format!("{n} seeds, {checks} checks"))
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(|s| s.as_str()).collect();
        Err(format!("{} of {n} seeds failed; {}", failures.len(), shown.join(" | ")))
    }
}

/// Counts validator runs for one seed and stops at the first violation.
struct Tally {
    seed: u64,
    checks: usize,
}

impl Tally {
    fn new(seed: u64) -> Self {
        Tally { seed, checks: 0 }
    }

    fn laws(&mut self, what: &str, report: ValidationReport) -> Result<(), String> {
        self.checks += 1;
        if report.is_ok() {
            Ok(())
        } else {
            Err(format!("seed {}: {what}: {report}", self.seed))
        }
    }

    fn that(&mut self, what: &str, ok: bool) -> Result<(), String> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(format!("seed {}: {what}", self.seed))
        }
    }

    fn must<T, E: std::fmt::Display>(&self, what: &str, r: Result<T, E>) -> Result<T, String> {
        r.map_err(|e| format!("seed {}: {what}: {e}", self.seed))
    }
}

fn law_suite_seed(seed: u64) -> Result<usize, String> {
    let p = params(3, 5, 3).with_seed(seed);
    let mut t = Tally::new(seed);
    let (c, d) = categories(&p);
    t.that("at most 8 morphisms", c.mor_count() <= 8 && d.mor_count() <= 8)?;
    t.laws("C", c.validate())?;
    t.laws("D", d.validate())?;
    t.laws("C^op", c.opposite().validate())?;
    t.laws("C x D", c.product(&d).validate())?;
    for a in c.objects() {
        t.laws("C/a", t.must("slice", c.slice(a))?.validate())?;
    }

    let sp = t.must("set presheaf", gen_set_presheaf(&c, &p))?;
    t.laws("P", sp.validate())?;
    let el = t.must("Σ(C, P)", category_of_elements(&sp))?;
    t.laws("Σ(C, P)", el.category.validate())?;
    t.laws("pr₁ of Σ(C, P)", el.projection.validate())?;

    let cp = t.must("cat presheaf", gen_cat_presheaf(&c, &p))?;
    t.that("fibers have at most 3 objects", cp.fibers().iter().all(|f| f.ob_count() <= 3))?;
    t.laws("𝒫", cp.validate())?;
    let gr = t.must("Σ(C, 𝒫)", grothendieck(&cp))?;
    t.laws("Σ(C, 𝒫)", gr.category.validate())?;
    t.laws("pr₁ of Σ(C, 𝒫)", gr.projection.validate())?;

    let q = t.must("𝒬", gen_q_over_elements(&cp, &p.with_seed(mix(seed ^ 0x5151))))?;
    t.laws("𝒬", q.validate())?;
    let spq = t.must("Σ^{P,Q}", sigma_pq(&cp, &q))?;
    t.laws("Σ^{P,Q}", spq.presheaf.validate())?;
    for f in &spq.fibers {
        t.laws("fiber of Σ^{P,Q}", f.category.validate())?;
    }

    let r = t.must("bi-presheaf", sigma_cat::testkit::gen_bi_presheaf(&c, &d, &p))?;
    t.laws("R", r.validate())?;
    for (name, s) in [("Σ^{D,R}", sigma_dr(&r)), ("Σ^{C,R}", sigma_cr(&r))] {
        let s = t.must(name, s)?;
        t.laws(name, s.presheaf.validate())?;
        for f in &s.fibers {
            t.laws(name, f.category.validate())?;
        }
    }
    let limits = Limits::default();
    let pi = t.must("ΠR", pi_presheaf(&r, &limits))?;
    t.laws("ΠR", pi.presheaf.validate())?;
    let fc = t.must("Fun(C, D)", functor_category(&c, &d, &limits))?;
    t.laws("Fun(C, D)", fc.category.validate())?;
    let pp = t.must("Π(C, Σ^{D,R})", product_category_pi(&r, &limits))?;
    t.laws("Π(C, Σ^{D,R})", pp.category.validate())?;
    Ok(t.checks)
}

fn criterion_law_suites() -> Check {
    over_seeds(1000, law_suite_seed)
}

fn criterion_choice() -> Check {
    over_seeds(200, |seed| {
        let t = Tally::new(seed);
        let r = t.must("bi-presheaf", bi_presheaf(&params(2, 2, 2).with_seed(seed)))?;
        let report = t.must("check ac", check_theorem_ac(&r, &Limits::default()))?;
        if report.passed {
            Ok(report.checks.len())
        } else {
            Err(format!("seed {seed}: {report}"))
        }
    })
}

fn criterion_assoc() -> Check {
    over_seeds(100, |seed| {
        let t = Tally::new(seed);
        let (p, q) = t.must("(𝒫, 𝒬)", pq_pair(&params(2, 2, 2).with_seed(seed)))?;
        let report = t.must("check assoc", check_theorem_assoc(&p, &q))?;
        if report.passed {
            Ok(report.checks.len())
        } else {
            Err(format!("seed {seed}: {report}"))
        }
    })
}

fn criterion_commute() -> Check {
    over_seeds(200, |seed| {
        let mut t = Tally::new(seed);
        let r = t.must("bi-presheaf", bi_presheaf(&params(2, 2, 2).with_seed(seed)))?;
        let report = t.must("check commute", check_commutativity(&r))?;
        t.that(&format!("{report}"), report.passed)?;
        let w = t.must("witness", sigma_cat::grothendieck::commutativity_witness(&r))?;
        let elements: usize = (0..r.left().ob_count())
            .flat_map(|a| (0..r.right().ob_count()).map(move |x| (a, x)))
            .map(|(a, x)| r.value(a, x).len())
            .sum();
        t.that("left side has Σ_a Σ_x |R(a,x)| objects", w.left.category.ob_count() == elements)?;
        t.that("right side has Σ_a Σ_x |R(a,x)| objects", w.right.category.ob_count() == elements)?;
        Ok(t.checks + report.checks.len())
    })
}

fn criterion_identities() -> Check {
    over_seeds(300, |seed| {
        let mut t = Tally::new(seed);
        let (c, d) = categories(&GenParams::default().with_seed(seed));
        let gr = t.must("Σ(C, 𝒫^D)", grothendieck(&constant_cat_presheaf(&c, &d)))?;
        let paired = t.must("pair names", gr.pair_named())?;
        t.that("Σ(C, 𝒫^D) = C × D", paired == c.product(&d))?;
        for a in c.objects() {
            let (f, g) = t.must("Yoneda witness", yoneda_slice_witness(&c, a))?;
            t.laws("witness", f.validate())?;
            t.laws("inverse", g.validate())?;
            let inverse = t.must("inverse pair", check_strict_inverse_pair(&f, &g))?;
            t.that(&format!("Σ(C, 𝒴^{a}) ≅ C/{a}"), inverse)?;
        }
        Ok(t.checks)
    })
}

fn fibration_negatives() -> Result<usize, String> {
    let arrow = Arc::new(FinCategory::arrow());
    let g = grothendieck(&constant_cat_presheaf(&arrow, &arrow)).map_err(|e| e.to_string())?;
    if check_discrete_fibration(&g.projection) {
        return Err("pr₁ of arrow × arrow reported discrete".into());
    }
    if check_split_fibration(&pseudo_presheaf()) {
        return Err("non-strict presheaf reported split".into());
    }
    let keep: Vec<usize> = (1..g.category.ob_count()).collect();
    let q = restrict_to_objects(&g.projection, &keep).map_err(|e| e.to_string())?;
    let e = q.source().clone();
    let lift = |f: usize, x: usize| e.incoming(x).iter().copied().find(|&l| q.mor(l) == f);
    if is_fibration(&q) || check_cleavage(&q, &lift) {
        return Err("projection with a missing lift reported a fibration".into());
    }
    Ok(3)
}

fn criterion_fibrations() -> Check {
    let negatives = fibration_negatives()?;
    let positives = over_seeds(300, |seed| {
        let mut t = Tally::new(seed);
        let p = params(3, 5, 3).with_seed(seed);
        let sp = t.must("set presheaf", set_presheaf(&p))?;
        let el = t.must("Σ(C, P)", category_of_elements(&sp))?;
        t.that("pr₁ of Σ(C, P) is a discrete fibration", check_discrete_fibration(&el.projection))?;
        let cp = t.must("cat presheaf", cat_presheaf(&p))?;
        t.that("pr₁ of Σ(C, 𝒫) is a split fibration", check_split_fibration(&cp))?;
        Ok(t.checks)
    })?;
    Ok(format!("{positives}, {negatives} negative cases rejected"))
}

fn criterion_oracles() -> Check {
    let functors = over_seeds(200, |seed| {
        let (c, d) = categories(&params(3, 5, 2).with_seed(seed));
        let mut got: Vec<Maps> = enumerate_functors(&c, &d, &Limits::default())
            .map_err(|e| format!("seed {seed}: {e}"))?
            .iter()
            .map(maps)
            .collect();
        got.sort();
        let want = brute_functors(&c, &d);
        if got == want {
            Ok(1)
        } else {
            Err(format!("seed {seed}: {} functors vs {} by brute force", got.len(), want.len()))
        }
    })?;
    let associates = over_seeds(150, |seed| {
        let t = Tally::new(seed);
        let r = t.must("bi-presheaf", bi_presheaf(&params(2, 2, 2).with_seed(seed)))?;
        let sigma = t.must("Σ^{D,R}", sigma_dr(&r))?;
        let all = t.must("functors", enumerate_functors(r.left(), r.right(), &Limits::default()))?;
        let mut n = 0;
        for phi in t.must("product set", cat_product_set(&sigma.presheaf, &Limits::default()))? {
            let mut got: Vec<Maps> =
                t.must("associates", find_associates(&r, &phi, &Limits::default()))?.iter().map(maps).collect();
            got.sort();
            if got != brute_associates(&r, &sigma, &phi, &all) {
                return Err(format!("seed {seed}: associates differ from the filtered enumeration"));
            }
            n += 1;
        }
        Ok(n)
    })?;
    let families = over_seeds(300, |seed| {
        let t = Tally::new(seed);
        let sp = t.must("set presheaf", set_presheaf(&params(3, 5, 3).with_seed(seed)))?;
        let got = t.must("product set", product_set_indices(&sp, &Limits::default()))?;
        if got == brute_product_set(&sp) {
            Ok(1)
        } else {
            Err(format!("seed {seed}: product set differs from brute force"))
        }
    })?;
    Ok(format!("functors: {functors}; associates: {associates}; product sets: {families}"))
}

fn criterion_second_projection() -> Check {
    over_seeds(1000, |seed| {
        let mut t = Tally::new(seed);
        let sp = t.must("set presheaf", set_presheaf(&params(3, 5, 3).with_seed(seed)))?;
        let family = t.must("pr₂", second_projection(&sp))?;
        let el = t.must("Σ(C, P)", category_of_elements(&sp))?;
        let lifted = t.must("P^Σ", lifted_presheaf(&sp, &el))?;
        let all = t.must("product set of P^Σ", product_set(&lifted, &Limits::default()))?;
        t.that("pr₂ lies in the product set of P^Σ", all.contains(&family))?;
        let indices: Vec<usize> = (0..el.category.ob_count()).map(|o| el.parts(o).1).collect();
        t.that("pr₂ passes the brute-force filter", brute_product_set(&lifted).contains(&indices))?;
        Ok(t.checks)
    })
}

fn criterion_cli() -> Check {
    let cases = common::corpus();
    let goldens = common::parseable_goldens();
    if goldens.len() < 10 {
        return Err(format!("only {} golden instances", goldens.len()));
    }
    for code in 0..=3 {
        if !cases.iter().any(|c| c.exit == code) {
            return Err(format!("no corpus case exits {code}"));
        }
    }
    for (name, text) in &goldens {
        common::round_trip(name, text)?;
    }
    for case in &cases {
        common::run_case(case)?;
    }
    Ok(format!("{} golden instances round-trip, {} exit-code cases hold", goldens.len(), cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("law suites", 120, criterion_law_suites),
        ("choice isomorphism", 60, criterion_choice),
        ("associativity isomorphism", 60, criterion_assoc),
        ("commutativity and element counts", 30, criterion_commute),
        ("constant presheaf and Yoneda identities", 120, criterion_identities),
        ("fibration claims", 120, criterion_fibrations),
        ("oracle equivalences", 120, criterion_oracles),
        ("second projection in the product set", 120, criterion_second_projection),
        ("CLI golden corpus", 120, criterion_cli),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (verdict, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {verdict}: {name} ({:.2}s of {budget}s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
