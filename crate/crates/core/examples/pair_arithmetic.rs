//! Products in H*(BGO(4)) computed in the pair model and rewritten in the basis.

use gocohom::cli::expr::{parse_expr_in, Parsed};
use gocohom::cohomring::CohomologyModel;

fn class(model: &CohomologyModel, text: &str) -> gocohom::error::Result<gocohom::cohomring::CohomElem> {
    match parse_expr_in(text, model)? {
        Parsed::Class { element, .. } => Ok(element),
        Parsed::Poly(p) => panic!("{p} is not a class"),
    }
}

fn main() -> gocohom::error::Result<()> {
    let model = CohomologyModel::new(2)?;
    let pairs = [
        ("L", "a1"),
        ("L", "d{1,2}"),
        ("d{1,2}", "d{1,2}"),
        ("a1 + a3", "a1^2"),
        ("L + b4", "L + b4"),
    ];
    for (x, y) in pairs {
        let product = &class(&model, x)? * &class(&model, y)?;
        println!("({x}) * ({y}) = {}", model.normal_form(&product)?);
        println!("    pair {product}");
    }

    let x = class(&model, "a1*a3 + a1^4")?;
    let basis = model.basis(4)?;
    let coords = model.coords_in(&basis, &x, 4)?;
    let labels: Vec<&str> = basis.iter().map(|b| b.label.as_str()).collect();
    let bits: Vec<u8> = (0..basis.len()).map(|i| coords.get(i) as u8).collect();
    println!("coordinates of a1*a3 + a1^4 over {labels:?}: {bits:?}");
    Ok(())
}
