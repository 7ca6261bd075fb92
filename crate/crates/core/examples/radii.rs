//! Inscribed and circumscribed disks.

use setflow::geomfun::inradius_circumradius;
use setflow::lab::random_body;
use setflow::Body2D;

fn main() -> setflow::Result<()> {
    let bodies = [
        ("disk", Body2D::disk(1.0)?),
        ("2x1 rectangle", Body2D::from_polygon(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]])?),
        ("random body", random_body(5, 8, 0.1)?),
    ];
    for (name, x) in &bodies {
        let r = inradius_circumradius(x)?;
        println!(
            "{name:>14}: r = {:.12} at ({:.4}, {:.4}), R = {:.12} at ({:.4}, {:.4})",
            r.r, r.incenter.x, r.incenter.y, r.big_r, r.circumcenter.x, r.circumcenter.y
        );
    }
    println!("{:>14}  R = √5/2 = {:.12}", "", 5f64.sqrt() / 2.0);
    Ok(())
}
