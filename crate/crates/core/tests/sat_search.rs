use id_forge::sat::{
    check_model, decode, encode, export_dimacs, model_from_literals, parse_dimacs, parse_model, valuation_for_witness,
    SatError,
};
use id_forge::statement::{search_witness, verify_witness, WitnessEntry};
use id_forge::{GeneratorId, Identity, StatementParams, Witness};

fn params(id: &str, kappa: usize, g: Vec<usize>, f: Vec<usize>) -> StatementParams {
    StatementParams::new(id.parse().unwrap(), kappa, g.len(), g, f).unwrap()
}

const MONO: &str = "3; 0-1,0-2,1-2";
const TWO_ONE: &str = "3; 0-1,0-2|1-2";

#[test]
fn search_and_solver_agree_on_small_instances() {
    let cases = [
        (params(MONO, 3, vec![2], vec![1]), true),
        (params(TWO_ONE, 3, vec![2], vec![1]), false),
        (params(MONO, 3, vec![1, 1], vec![1, 1]), false),
        (params(MONO, 3, vec![2, 2], vec![1, 1]), true),
        (params("2; 0-1", 2, vec![2], vec![1]), false),
    ];
    for (p, expected) in cases {
        let found = search_witness(&p, 3).unwrap();
        let cnf = encode(&p, 3).unwrap();
        let model = cnf.solve().literals();
        assert_eq!(found.is_some(), expected, "search on {p:?}");
        assert_eq!(model.is_some(), expected, "solver on {p:?}");
        if let Some(m) = model {
            assert!(verify_witness(&p, &decode(&m, &cnf).unwrap()).passed());
        }
    }
}

#[test]
fn search_witness_is_a_model() {
    let p = params(MONO, 3, vec![2, 2], vec![1, 1]);
    let w = search_witness(&p, 3).unwrap().unwrap();
    let cnf = encode(&p, 3).unwrap();
    let lits = valuation_for_witness(&cnf, &w).unwrap();
    let values = model_from_literals(cnf.num_vars(), &lits).unwrap();
    check_model(&cnf, &values).unwrap();
    let back = decode(&lits, &cnf).unwrap();
    assert!(verify_witness(&p, &back).passed());
}

#[test]
fn failing_witness_is_not_a_model() {
    let p = params(MONO, 3, vec![2], vec![1]);
    let cnf = encode(&p, 2).unwrap();
    // one shared generator colors every pair alike
    let w = Witness::level_independent(&p, |_| WitnessEntry {
        gens: vec![GeneratorId(0)],
        terms: vec![2, 1],
    });
    assert!(!verify_witness(&p, &w).passed());
    let lits = valuation_for_witness(&cnf, &w).unwrap();
    let values = model_from_literals(cnf.num_vars(), &lits).unwrap();
    assert!(matches!(check_model(&cnf, &values), Err(SatError::UnsatisfiedClause { .. })));
}

#[test]
fn dimacs_text_pipeline() {
    let p = params(MONO, 3, vec![2], vec![1]);
    let cnf = encode(&p, 3).unwrap();
    let text = export_dimacs(&cnf);
    let back = parse_dimacs(&text).unwrap();
    assert_eq!(back, cnf);
    let lits = back.solve().literals().unwrap();
    // competition-style solver output
    let body: Vec<String> = lits.iter().map(i32::to_string).collect();
    let out = format!("c external\ns SATISFIABLE\nv {}\nv 0\n", body.join(" "));
    let model = parse_model(&out).unwrap();
    let w = decode(&model, &back).unwrap();
    assert!(verify_witness(&p, &w).passed());
    // generators are renumbered densely from zero
    let gens = w.generators();
    assert_eq!(gens, (0..gens.len() as u32).map(GeneratorId).collect::<Vec<_>>());
}

#[test]
fn truncated_or_foreign_dimacs_is_rejected() {
    let p = params(MONO, 3, vec![2], vec![1]);
    let text = export_dimacs(&encode(&p, 2).unwrap());
    let cut: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
    assert!(matches!(parse_dimacs(&cut), Err(SatError::Dimacs { .. })));
    let no_legend: String = text.lines().filter(|l| !l.starts_with("c params")).map(|l| format!("{l}\n")).collect();
    assert!(parse_dimacs(&no_legend).is_err());
    let other = Identity::all_distinct(3).to_string();
    let swapped = text.replacen(MONO, &other, 1);
    assert!(parse_dimacs(&swapped).is_ok(), "same layout, other identity still parses");
}

#[test]
fn search_is_deterministic() {
    let p = params(MONO, 3, vec![2, 2], vec![1, 1]);
    let a = search_witness(&p, 3).unwrap().unwrap();
    let b = search_witness(&p, 3).unwrap().unwrap();
    assert_eq!(a.to_json(&p), b.to_json(&p));
}
