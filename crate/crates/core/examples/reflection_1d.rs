//! The scalar case: `D_H X = −X` on intervals has the closed form
//! `[x1 cosh t − x2 sinh t, x2 cosh t − x1 sinh t]`.

use setflow::sde::solve_reflection_1d;
use setflow::Interval1D;

fn main() -> setflow::Result<()> {
    let x0 = Interval1D::new(0.0, 1.0)?;
    println!("{:>5} {:>12} {:>12} {:>12}", "t", "lo", "hi", "diam/e^t");
    for t in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let x = solve_reflection_1d(&x0, t)?;
        println!("{t:5.1} {:12.8} {:12.8} {:12.8}", x.lo(), x.hi(), x.diameter() / t.exp());
    }
    Ok(())
}
