use num_bigint::BigUint;
use symdesign::catalog::load_catalog;
use symdesign::pipeline::{default_stages, large_filter, run, PipelineReport, Status};

fn m12() -> PipelineReport {
    run(&load_catalog("catalogs/m12").unwrap(), &default_stages()).unwrap()
}

#[test]
fn survivors_satisfy_the_arithmetic_gates() {
    let catalog = load_catalog("catalogs/m12").unwrap();
    let record = &catalog.groups[0];
    let report = m12();
    for t in report.groups[0].survivors() {
        let m = &record.maximals[t.nr_m - 1];
        let n = &record.maximals[t.nr_n - 1];
        assert!(large_filter(&record.order, &m.order) && large_filter(&record.order, &n.order));
        assert_eq!(&t.i_h * &m.index, t.params.v);
        assert_eq!(&t.i_k * &n.index, t.params.v);
        assert_eq!(&n.order % &t.params.k, BigUint::from(0u32));
    }
}

#[test]
fn found_designs_satisfy_the_flag_conditions() {
    let report = m12();
    let g = &report.groups[0];
    for t in g.tuples.iter().filter(|t| t.status == Status::DesignFound) {
        for d in &t.designs {
            let p = d.invariants.params;
            assert_eq!(p.k * (p.k - 1), p.lambda * (p.v - 1));
            assert!(p.lambda * p.v < p.k * p.k);
            assert_eq!(d.block_stabilizer_order.clone() * BigUint::from(p.v), g.order);
            assert!(d.flag_transitive);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let a = m12();
    let b = m12();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn stages_can_be_selected() {
    let catalog = load_catalog("catalogs/m12").unwrap();
    let report = run(&catalog, &["subgroup-index"]).unwrap();
    let g = &report.groups[0];
    assert_eq!(g.count(Status::Open), 6);
    assert_eq!(g.count(Status::Nsg), g.tuples.len() - 6);
    let report = run(&catalog, &[]).unwrap();
    assert!(report.groups[0].tuples.iter().all(|t| t.status == Status::Open));
}

#[test]
fn json_mirrors_text() {
    let r = m12();
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let tuples = json["groups"][0]["tuples"].as_array().unwrap();
    assert_eq!(tuples.len(), r.groups[0].tuples.len());
    let found = tuples.iter().filter(|t| t["status"] == "design-found").count();
    assert_eq!(found, 4);
    assert_eq!(tuples[0]["params"]["v"], "36");
}
