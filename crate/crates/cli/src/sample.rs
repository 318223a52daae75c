//! Random finite posets with a class of marked arrows, run through the
//! fractions checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use wgdbl_core::bicat::omega_comparison;
use wgdbl_core::dblcat::check_weak_globularity;
use wgdbl_core::fincat::{ArrowDecl, CategoryPresentation, FinCategory};
use wgdbl_core::fractions::{
    build_fractions, check_fractions_conditions, classify_for_companions, factor_cell, representative_robustness,
    FractionsInput, FractionsPresentation,
};

use crate::{CliError, Ctx};

/// A poset on `0..n` as a category presentation, from a relation closed
/// under transitivity.
fn poset(rng: &mut impl Rng) -> (CategoryPresentation, Vec<(usize, usize)>) {
    let n = rng.gen_range(2..=5);
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
        for j in i + 1..n {
            le[i][j] = rng.gen_bool(0.4);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let ob = |i: usize| format!("p{i}");
    let ar = |i: usize, j: usize| if i == j { format!("1_p{i}") } else { format!("p{i}<p{j}") };
    let mut arrows = Vec::new();
    let mut strict = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                arrows.push(ArrowDecl { id: ar(i, j), src: ob(i), tgt: ob(j) });
                if i != j {
                    strict.push((i, j));
                }
            }
        }
    }
    let mut compose = Vec::new();
    for &(i, j) in &strict {
        for &(j2, k) in &strict {
            if j == j2 {
                compose.push([ar(j, k), ar(i, j), ar(i, k)]);
            }
        }
    }
    let identities: BTreeMap<String, String> = (0..n).map(|i| (ob(i), ar(i, i))).collect();
    (CategoryPresentation { objects: (0..n).map(ob).collect(), arrows, identities, compose }, strict)
}

/// Draws a poset and a composition-closed `W` satisfying the fraction
/// conditions (identities only if no draw does), then runs the checks.
pub(crate) fn run(seed: u64, nmax: usize, ctx: &mut Ctx) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pres, strict) = poset(&mut rng);
    let base = Arc::new(FinCategory::from_presentation(&pres).map_err(|e| CliError::Input(e.to_string()))?);
    let ids: Vec<usize> = base.objects().map(|o| base.identity(o)).collect();
    let mut chosen = FractionsPresentation::identities(base.clone());
    let mut draws = 0;
    let c = &*base;
    for _ in 0..20 {
        draws += 1;
        let mut w: Vec<usize> = strict
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|&(i, j)| c.arr_by_name(&format!("p{i}<p{j}")).expect("declared"))
            .collect();
        w.extend(&ids);
        loop {
            let extra: Vec<usize> = w
                .iter()
                .flat_map(|&g| w.iter().filter_map(move |&f| c.compose(g, f)))
                .filter(|h| !w.contains(h))
                .collect();
            if extra.is_empty() {
                break;
            }
            w.extend(extra);
        }
        let p = FractionsPresentation::new(base.clone(), w);
        if check_fractions_conditions(&p).cf_passed {
            chosen = p;
            break;
        }
    }
    let input: FractionsInput = chosen.to_input();
    ctx.output = Some(json!({ "seed": seed, "draws": draws, "input": input }));
    let f = match build_fractions(&chosen) {
        Ok(f) => f,
        Err(e) => {
            ctx.fail("double category of fractions", e);
            return Ok(());
        }
    };
    ctx.dot = Some(wgdbl_core::dot::double_dot(&f.double));
    ctx.verdict(format!("weakly globular (n <= {nmax})"), check_weak_globularity(&f.double, nmax).passed);
    ctx.verdict("every representative pair refines", representative_robustness(&f).passed);
    ctx.verdict("companions and conjoints match their normal forms", classify_for_companions(&f).agrees);
    let factors = f.double.x1.arrows().all(|c| factor_cell(&f, c).is_ok_and(|p| p.all_factors_inhabited && p.pasted_equals_cell));
    ctx.verdict("every cell factors through binding cells", factors);
    match omega_comparison(&chosen) {
        Ok(r) => {
            ctx.verdict("comparison with the bicategory of fractions is a biequivalence", r.biequivalence);
        }
        Err(e) => ctx.fail("comparison with the bicategory of fractions is a biequivalence", e),
    }
    Ok(())
}
