//! The built-in quantales: joins, products, internal homs, and a law check.

use qodesign::laws::check_laws;
use qodesign::quantale::{QValue, Quantale, TNorm};

fn show(q: &Quantale, p: &QValue, r: &QValue) -> qodesign::Result<()> {
    println!(
        "{:>18}: {} ⊔ {} = {}, {} ⊙ {} = {}, [{}, {}] = {}",
        q.id(),
        q.render_short(p),
        q.render_short(r),
        q.render_short(&q.join2(p, r)),
        q.render_short(p),
        q.render_short(r),
        q.render_short(&q.mult(p, r)),
        q.render_short(p),
        q.render_short(r),
        q.render_short(&q.internal_hom(p, r)?),
    );
    Ok(())
}

fn main() -> qodesign::Result<()> {
    let cost = Quantale::cost();
    show(&cost, &QValue::real(3.0), &QValue::real(5.0))?;
    show(&Quantale::bool(), &QValue::Bool(true), &QValue::Bool(false))?;
    let pace = Quantale::pace();
    show(&pace, &pace.parse_value("A")?, &pace.parse_value("C")?)?;
    for t in [TNorm::Godel, TNorm::Goguen, TNorm::Lukasiewicz] {
        show(&Quantale::fuzz(t), &QValue::real(0.7), &QValue::real(0.5))?;
    }
    show(&Quantale::nat(), &QValue::Nat(2), &QValue::Nat(7))?;

    let p = Quantale::powerset("P(I)", vec!["i1".into(), "i2".into(), "i3".into()])?;
    show(&p, &p.parse_value("[i1, i2]")?, &p.parse_value("[i2, i3]")?)?;
    let prod = Quantale::product("Cost×Bool", vec![cost.clone(), Quantale::bool()])?;
    let a = prod.parse_value("(2, true)")?;
    let b = prod.parse_value("(inf, true)")?;
    show(&prod, &a, &b)?;

    println!();
    for q in [cost, pace, p, Quantale::fuzz(TNorm::Lukasiewicz)] {
        let report = check_laws(&q, 2000);
        let mode = if report.exhaustive { "exhaustive" } else { "sampled" };
        println!("{:>18}: laws {} ({mode})", q.id(), if report.all_passed() { "hold" } else { "FAIL" });
    }
    Ok(())
}
