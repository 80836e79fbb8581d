//! Reading a model from text: diagrams, queries, sweeps, diagnostics and the
//! canonical rendering.

use qodesign::ModelDocument;

const MODEL: &str = r#"
# A motor and a controller over Cost, with a Bool feasibility stage in front.
category Torque : Cost = chain {low, mid, high}
category Current : Cost = chain {"1A", "2A", "4A"}
category Mode : Bool = order {eco, sport} {eco <= sport}

problem motor : Current -> Torque = table [
  [5, inf, inf],
  [4, 9, inf],
  [3, 6, 12]
]
problem select : Mode -> Current over Cost = table [
  [0, inf, inf],
  [0, 2, 3]
]
lax b2c : Bool -> Cost = bool_to_unit
diagram drive = series(motor, identity(Torque))
diagram system = series(select, motor)
query system sport mid
sweep torque = system rows * cols {mid, high}
"#;

fn main() -> qodesign::Result<()> {
    let doc = ModelDocument::parse(MODEL)?;
    doc.validate_all()?;
    println!("diagrams {:?}, queries {:?}", doc.diagram_names(), doc.queries());
    for (d, r, f) in doc.queries() {
        println!("{d}({r}, {f}) = {}", doc.run_query(d, r, f)?.as_real().unwrap());
    }
    let table = doc.run_sweep("torque")?;
    print!("{}", table.to_text());
    print!("{}", table.to_csv()?);
    println!("{}", table.to_json());
    for s in doc.size_report()? {
        println!("{}: cuts {:?}", s.diagram, s.cuts);
    }

    let again = ModelDocument::parse(&doc.render())?;
    println!("render round-trips: {}", again.equivalent(&doc));

    for bad in [
        "category A : Cost = chain {x, y}\nproblem p : A -> B = table [[0, 0], [0, 0]]",
        "category A : Cost = chain {x, y}\nproblem p : A -> A = table [[5, 0], [0, 0]]",
        "category A : Cost = chain {x y}",
    ] {
        println!("error: {}", ModelDocument::parse(bad).unwrap_err());
    }
    Ok(())
}
