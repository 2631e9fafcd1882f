//! Lawvere-valued relations as weighted graphs: composition is a
//! min-plus product, and residuals give the best one-sided factorisations.

use qkan::{FiniteSet, GraphKind, QValue, Quantale, Result, SetMap, Side, VCat, VRel};

fn show(name: &str, r: &VRel) {
    println!("{name} : {} ⇸ {}", r.source().name(), r.target().name());
    for x in 0..r.source().len() {
        let row: Vec<String> = r.row(x).iter().map(|v| format!("{:>5}", v.to_string())).collect();
        println!("  {:>5} |{}", r.source().element(x), row.join(""));
    }
}

fn main() -> Result<()> {
    let q = Quantale::Lawvere;
    let towns = FiniteSet::new("Towns", ["ash", "elm", "oak", "yew"])?;
    // one-step road lengths, inf where there is no road
    let roads = VRel::new(
        q,
        towns.clone(),
        towns.clone(),
        ["0", "2", "inf", "7", "2", "0", "3", "inf", "inf", "3", "0", "1", "7", "inf", "1", "0"]
            .iter()
            .map(|s| q.parse_value(s))
            .collect::<Result<_>>()?,
    )?;
    show("roads", &roads);
    show("roads ∘ roads", &roads.compose(&roads)?);

    // the generated category is the shortest-path metric
    let metric = VCat::generated_by(&roads)?;
    show("shortest paths", metric.hom());
    assert!(metric.check().holds());

    // K ⟜ H is the largest X with X ∘ H ≤ K; in Lawvere order, the pointwise smallest distances
    let depots = FiniteSet::new("Depots", ["north", "south"])?;
    let reach = VRel::from_fn(q, &depots, &towns, |d, t| QValue::int(if d == 0 { (t * t) as i64 } else { 3 - t as i64 }))?;
    let slack = reach.residuate(Side::Right, metric.hom())?;
    show("reach", &reach);
    show("reach ⟜ metric", &slack);
    assert!(slack.compose(metric.hom())?.le(&reach)?);
    // reach is a module over the metric exactly when it is its own residual
    println!("reach is a module: {}", slack == reach);

    // graphs of maps and the identity law
    let f = SetMap::new(towns.clone(), depots.clone(), vec![0, 0, 1, 1])?;
    let fstar = VRel::graph(q, &f, GraphKind::Companion);
    show("companion of f", &fstar);
    assert_eq!(VRel::identity(q, &towns).compose(&fstar)?, fstar);
    Ok(())
}
