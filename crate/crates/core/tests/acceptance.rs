//! Acceptance criteria, one PASS/FAIL line each. Counts are exact; each
//! criterion with a time budget fails if it runs over.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use semibrace::brace::decompose;
use semibrace::catalog::{cyclic, small_groups, SUPPORTED_ORDERS};
use semibrace::classify::{match_census, verify_classification, Target};
use semibrace::construct::{
    brace_p2, diag_involutions, family, family_ids, left_nilpotent_example, matrix_a, trivial_semibrace,
    trivial_skewbrace, BraceP2, FamilyId, Theorem,
};
use semibrace::enumerate::{enumerate_generic, enumerate_generic_unpruned, enumerate_structural, Census, EFilter};
use semibrace::iso::{brace_automorphisms, isomorphic};
use semibrace::nilpotency::{check_rnilp1, dot, is_right_nil, left_series, right_series, scaled_g_plus_e};
use semibrace::ybe::{check_braid, check_properties, solution_from};
use semibrace::{Exec, Permutation, SemiBrace};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: semibrace::Error) -> String {
    e.to_string()
}

fn families(theorem: Theorem, p: usize, q: Option<usize>) -> Result<Vec<(FamilyId, SemiBrace)>, String> {
    family_ids(theorem, p, q)
        .map_err(err)?
        .into_iter()
        .map(|id| family(&id).map(|b| (id, b)).map_err(err))
        .collect()
}

fn items(theorem: Theorem, p: usize, q: Option<usize>, keep: &[usize]) -> Result<Vec<(FamilyId, SemiBrace)>, String> {
    Ok(families(theorem, p, q)?.into_iter().filter(|(id, _)| keep.contains(&id.item)).collect())
}

fn census_matches(fams: &[(FamilyId, SemiBrace)], census: &Census, what: &str) -> Result<(), String> {
    let m = match_census(fams, census, |_| true);
    ensure(
        m.matched,
        format!(
            "{what}: census of {} vs {} families, unmatched families {:?}, unmatched entries {:?}",
            m.census_size,
            fams.len(),
            m.unmatched_families,
            m.unmatched_census
        ),
    )
}

fn criterion_1() -> Outcome {
    let c = enumerate_generic(6, EFilter::AtLeast(2)).map_err(err)?;
    ensure(c.len() == 6, format!("expected 6 classes, got {}", c.len()))?;
    census_matches(&families(Theorem::PqCongruent, 3, Some(2))?, &c, "n=6")?;
    Ok("n=6, |E|>1: 6 classes, bijective with the six (3,2) families".into())
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let c4 = enumerate_generic(4, EFilter::AtLeast(2)).map_err(err)?;
    let t4 = t.elapsed();
    ensure(t4 < Duration::from_secs(60), format!("n=4 took {t4:?}"))?;
    ensure(c4.len() == 3, format!("n=4: expected 3 classes, got {}", c4.len()))?;
    census_matches(&items(Theorem::PqNoncongruent, 2, Some(2), &[1, 2, 6])?, &c4, "n=4")?;
    let t = Instant::now();
    let c9 = enumerate_generic(9, EFilter::AtLeast(2)).map_err(err)?;
    let t9 = t.elapsed();
    ensure(t9 < Duration::from_secs(600), format!("n=9 took {t9:?}"))?;
    ensure(c9.len() == 3, format!("n=9: expected 3 classes, got {}", c9.len()))?;
    census_matches(&items(Theorem::PqNoncongruent, 3, Some(3), &[1, 2, 6])?, &c9, "n=9")?;
    Ok(format!("n=4: 3 classes ({t4:.2?}), n=9: 3 classes ({t9:.2?}), matching items 1, 2, 6"))
}

fn criterion_3() -> Outcome {
    let c15 = enumerate_structural(15, EFilter::AtLeast(2)).map_err(err)?;
    ensure(c15.len() == 3, format!("n=15: expected 3 classes, got {}", c15.len()))?;
    census_matches(&items(Theorem::PqNoncongruent, 5, Some(3), &[3, 4, 5])?, &c15, "n=15")?;
    let s10 = enumerate_structural(10, EFilter::AtLeast(2)).map_err(err)?;
    ensure(s10.len() == 6, format!("n=10: expected 6 classes, got {}", s10.len()))?;
    let f10 = families(Theorem::PqCongruent, 5, Some(2))?;
    census_matches(&f10, &s10, "structural n=10")?;
    let g10 = enumerate_generic(10, EFilter::AtLeast(2)).map_err(err)?;
    census_matches(&f10, &g10, "generic n=10")?;
    Ok("n=15: 3 classes (items 3-5 at (5,3)); n=10: 6 classes, structural = generic = families at (5,2)".into())
}

fn criterion_4() -> Outcome {
    let r = verify_classification(Target::All2p2, 3, None).map_err(err)?;
    let per: Vec<usize> = Theorem::TWO_P2.iter().map(|t| r.families.iter().filter(|f| f.id.theorem == *t).count()).collect();
    ensure(per == [3, 5, 5], format!("family counts {per:?}"))?;
    ensure(r.families.iter().all(|f| f.valid && f.statement_matches), "a family fails its statement")?;
    ensure(r.pairwise_non_isomorphic, format!("isomorphic pair {:?}", r.isomorphic_pair))?;
    ensure(r.ok, r.summary())?;
    Ok(format!("p=3: 3+5+5 = {} valid, pairwise non-isomorphic; {}", r.families.len(), r.summary()))
}

fn involutions(auts: &[Permutation]) -> Vec<&Permutation> {
    auts.iter().filter(|a| a.order() == 2).collect()
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for p in [3, 5] {
        let g1 = involutions(&brace_automorphisms(&brace_p2(BraceP2::G1, p).map_err(err)?)).len();
        ensure(g1 == 1, format!("p={p}: Aut(G1) has {g1} involutions"))?;
        let g2 = involutions(&brace_automorphisms(&brace_p2(BraceP2::G2, p).map_err(err)?)).len();
        ensure(g2 == 0, format!("p={p}: Aut(G2) has {g2} involutions"))?;
        let g3_auts = brace_automorphisms(&brace_p2(BraceP2::G3, p).map_err(err)?);
        for a in diag_involutions(p) {
            ensure(g3_auts.contains(&a), format!("p={p}: {a} is not an automorphism of G3"))?;
        }
        let g4_auts = brace_automorphisms(&brace_p2(BraceP2::G4, p).map_err(err)?);
        let inv4 = involutions(&g4_auts);
        let a: Vec<Permutation> = (0..p).map(|b| matrix_a(b, p)).collect();
        for x in &inv4 {
            let c = a.iter().position(|ab| ab == *x).ok_or(format!("p={p}: involution {x} of G4 is no A_b"))?;
            let conj = a.iter().any(|ad| ad.inverse().compose(&a[0]).compose(ad) == a[c]);
            ensure(conj, format!("p={p}: A_{c} not conjugate to A_0 by any A_d"))?;
        }
        ensure(inv4.len() == p, format!("p={p}: G4 has {} involutions", inv4.len()))?;
        notes.push(format!("p={p}: G1 1, G2 0, G4 {} = A_0..A_{}", inv4.len(), p - 1));
    }
    Ok(notes.join("; "))
}

/// Every constructed or enumerated semi-brace of order at most 18.
fn corpus() -> Result<Vec<SemiBrace>, String> {
    let mut out = Vec::new();
    for n in 1..=10 {
        out.extend(enumerate_generic(n, EFilter::Any).map_err(err)?.entries.into_iter().map(|e| e.semibrace));
    }
    for (n, f) in [(14, EFilter::AtLeast(2)), (15, EFilter::AtLeast(2)), (18, EFilter::Sylow)] {
        out.extend(enumerate_structural(n, f).map_err(err)?.entries.into_iter().map(|e| e.semibrace));
    }
    for (t, p, q) in [
        (Theorem::PqNoncongruent, 2, Some(2)),
        (Theorem::PqNoncongruent, 3, Some(3)),
        (Theorem::PqNoncongruent, 5, Some(3)),
        (Theorem::PqCongruent, 3, Some(2)),
        (Theorem::PqCongruent, 5, Some(2)),
        (Theorem::PqCongruent, 7, Some(2)),
        (Theorem::TwoP2E2Cyclic, 3, None),
        (Theorem::TwoP2E2Noncyclic, 3, None),
        (Theorem::TwoP2Ep2, 3, None),
    ] {
        out.extend(families(t, p, q)?.into_iter().map(|(_, b)| b));
    }
    for w in [BraceP2::G1, BraceP2::G2, BraceP2::G3, BraceP2::G4] {
        out.push(brace_p2(w, 3).map_err(err)?);
    }
    for &n in SUPPORTED_ORDERS.iter().filter(|&&n| n <= 18) {
        for g in small_groups(n).map_err(err)? {
            out.push(trivial_semibrace(&g));
            out.push(trivial_skewbrace(&g));
        }
    }
    Ok(out)
}

fn criterion_6(corpus: &[SemiBrace]) -> Outcome {
    let (mut decomposable, mut trivial_g, mut witness) = (0, 0, None);
    for (i, b) in corpus.iter().enumerate() {
        let a = b.anatomy();
        for x in 0..b.n() {
            for y in 0..b.n() {
                ensure(a.in_g(dot(b, x, y)), format!("entry {i}: {x}·{y} outside G"))?;
            }
        }
        let right = right_series(b);
        let (nil, orders) = is_right_nil(b);
        ensure(!right.is_nilpotent() || nil, format!("entry {i}: right nilpotent but not right nil"))?;
        if nil && !right.is_nilpotent() && witness.is_none() {
            witness = Some(i);
        }
        if let Some(d) = decompose(b).map_err(err)? {
            decomposable += 1;
            let r = check_rnilp1(b).map_err(err)?;
            ensure(r.agree, format!("entry {i}: right nilpotency criterion disagrees: {r:?}"))?;
            let g = &d.g.brace;
            let g_trivial = (0..g.n()).all(|x| (0..g.n()).all(|y| g.add(x, y) == g.circ(x, y)));
            if g_trivial {
                trivial_g += 1;
                ensure(nil && orders.iter().all(|o| o.is_some_and(|k| k <= 3)), format!("entry {i}: some b^(3) ≠ 0"))?;
            }
        }
    }

    let f3 = family(&FamilyId::new(Theorem::PqCongruent, 3, 3, Some(2))).map_err(err)?;
    let l = left_series(&f3);
    ensure(l.chain.len() == 1 && !l.is_nilpotent(), format!("family 3 at (3,2): left chain {:?}", l.chain))?;

    let b27 = left_nilpotent_example(3).map_err(err)?;
    let l27 = left_series(&b27);
    ensure(l27.is_nilpotent(), "order-27 example is not left nilpotent")?;
    for (k, member) in l27.chain.iter().enumerate() {
        let bound = scaled_g_plus_e(&b27, 3usize.pow(k as u32));
        ensure(member.iter().all(|x| bound.contains(x)), format!("order-27 example: B^{} exceeds 3^{k}·G + E", k + 1))?;
    }
    let w = witness.ok_or("no right nil entry that is not right nilpotent")?;
    Ok(format!(
        "{} entries; {decomposable} decomposable agree; {trivial_g} with trivial G have b^(3)=0; B²=B for family 3; order 27 left nilpotent in {} steps within bound; entry {w} (order {}) right nil, not right nilpotent",
        corpus.len(),
        l27.chain.len(),
        corpus[w].n()
    ))
}

fn criterion_7(corpus: &[SemiBrace]) -> Outcome {
    let t = Instant::now();
    for (i, b) in corpus.iter().enumerate() {
        let r = solution_from(b);
        let braid = check_braid(&r);
        ensure(braid.holds, format!("entry {i}: braid relation fails at {:?}", braid.witness))?;
        ensure(check_properties(&r).left_nondegenerate, format!("entry {i}: not left non-degenerate"))?;
    }
    for n in 1..=12 {
        ensure(check_properties(&solution_from(&trivial_skewbrace(&cyclic(n)))).involutive, format!("Z/{n} not involutive"))?;
    }
    for n in 2..=18 {
        ensure(!check_properties(&solution_from(&trivial_semibrace(&cyclic(n)))).bijective, format!("trivial Z/{n} bijective"))?;
    }
    let el = t.elapsed();
    ensure(el < Duration::from_secs(300), format!("took {el:?}"))?;
    Ok(format!("{} solutions satisfy the braid relation and are left non-degenerate ({el:.2?})", corpus.len()))
}

fn criterion_8() -> Outcome {
    for n in [4, 6, 9, 10] {
        let g = enumerate_generic(n, EFilter::AtLeast(2)).map_err(err)?;
        let s = enumerate_structural(n, EFilter::AtLeast(2)).map_err(err)?;
        ensure(g.len() == s.len(), format!("n={n}: generic {} vs structural {}", g.len(), s.len()))?;
        for b in g.braces() {
            ensure(s.braces().any(|c| isomorphic(b, c).is_some()), format!("n={n}: generic class missing from structural"))?;
        }
    }
    let mut sizes = Vec::new();
    for n in 1..=6 {
        let pruned = enumerate_generic(n, EFilter::Any).map_err(err)?;
        let unpruned = enumerate_generic_unpruned(n, EFilter::Any, Exec::default()).map_err(err)?;
        ensure(
            pruned.braces().eq(unpruned.braces()),
            format!("n={n}: pruned {} vs unpruned {}", pruned.len(), unpruned.len()),
        )?;
        sizes.push(pruned.len());
    }
    Ok(format!("generic = structural at n = 4, 6, 9, 10; pruned = unpruned at n = 1..6 with sizes {sizes:?}"))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let runs: Vec<(usize, &str, u64, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "pq congruent census", 60, Box::new(criterion_1)),
        (2, "pq with p = q census", 660, Box::new(criterion_2)),
        (3, "pq noncongruent census", 600, Box::new(criterion_3)),
        (4, "2p² classification", 900, Box::new(criterion_4)),
        (5, "automorphisms of the p² braces", 0, Box::new(criterion_5)),
        (6, "nilpotency suite", 0, Box::new(|| criterion_6(corpus.as_ref().map_err(Clone::clone)?))),
        (7, "Yang-Baxter suite", 300, Box::new(|| criterion_7(corpus.as_ref().map_err(Clone::clone)?))),
        (8, "oracle equivalence", 0, Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (k, name, limit, run) in runs {
        let t = Instant::now();
        let mut outcome = run();
        let el = t.elapsed();
        if limit > 0 && el > Duration::from_secs(limit) {
            outcome = Err(format!("over the {limit}s budget ({el:.2?})"));
        }
        match outcome {
            Ok(msg) => println!("criterion {k} [{name}]: PASS ({el:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k} [{name}]: FAIL ({el:.2?}) {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
