//! Building enriched categories: orders, explicit hom tables, N̄ chains, tensors.

use qodesign::quantale::{QValue, Quantale};
use qodesign::QCategory;

fn print(c: &QCategory) {
    let q = c.quantale();
    let w = c.objects().iter().map(|o| o.chars().count()).max().unwrap_or(0);
    println!("{} objects over {}:", c.len(), q.id());
    for (i, x) in c.objects().iter().enumerate() {
        let row: Vec<String> = (0..c.len()).map(|j| format!("{:>4}", q.render_short(c.hom(i, j)))).collect();
        println!("  {x:>w$} {}", row.join(" "));
    }
}

fn main() -> qodesign::Result<()> {
    let quality = QCategory::from_order(vec!["Low".into(), "High".into()], &[("Low".into(), "High".into())])?;
    print(&quality);

    // Travel costs between three sites; the table is closed under composition.
    let cost = Quantale::cost();
    let r = QValue::real;
    let sites = QCategory::new(
        &cost,
        vec!["depot".into(), "hub".into(), "site".into()],
        vec![
            vec![r(0.0), r(2.0), r(5.0)],
            vec![r(3.0), r(0.0), r(3.0)],
            vec![QValue::inf(), QValue::inf(), r(0.0)],
        ],
    )?;
    print(&sites);

    let broken = QCategory::new(
        &cost,
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![r(0.0), r(1.0), r(9.0)],
            vec![QValue::inf(), r(0.0), r(1.0)],
            vec![QValue::inf(), QValue::inf(), r(0.0)],
        ],
    );
    println!("a→b→c costs 2 but hom(a,c) = 9: {}", broken.unwrap_err());

    print(&QCategory::nat_category(3, true)?);

    let t = quality.tensor(&QCategory::discrete(&Quantale::bool(), vec!["x".into(), "y".into()])?)?;
    println!("tensor objects {:?}", t.objects());
    println!("hom((Low,x), (High,x)) = {}", t.hom_by_name("(Low,x)", "(High,x)")?.as_bool().unwrap());
    println!("hom((Low,x), (High,y)) = {}", t.hom_by_name("(Low,x)", "(High,y)")?.as_bool().unwrap());
    Ok(())
}
