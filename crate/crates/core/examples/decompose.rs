//! Decompose a depth-2 series at z = 1 and check it against direct summation.

use polyzeta::atone::decompose_at_one;
use polyzeta::numeval::series_numeric;
use polyzeta::parse::parse_polynomial;
use polyzeta::series::MultSeries;
use rug::Float;

fn main() -> polyzeta::Result<()> {
    let num = parse_polynomial("5*k2^2 - k1^2 - 4*k1*k2 - 3*k1 + 7*k2", 2)?;
    let s = MultSeries::new(num, vec![4, 3], vec![2, 3], vec![0, 1])?;
    let value = decompose_at_one(&s)?;
    println!("{value}");
    let ones = [Float::with_val(128, 1), Float::with_val(128, 1)];
    let direct = series_numeric(&s, &ones, 20000, 128)?;
    println!("symbolic {:.25}", value.numeric(128)?);
    println!("direct   {:.25}", direct.extrapolated);
    Ok(())
}
