use super::SymbolSpec;
use crate::scalar::Real;

/// Representative instance of every catalog kind on ℝⁿ, with a stable name.
///
/// For `n = 2` the list also contains block components acting on each axis.
pub fn catalog<T: Real>(dimension: usize) -> Vec<(String, SymbolSpec<T>)> {
    let n = dimension;
    let l = T::lit;
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 1.5, 2.0] {
        out.push((
            format!("power_{alpha}"),
            SymbolSpec::power(l(alpha), n).expect("valid"),
        ));
    }
    let q: Vec<Vec<T>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| if j == k { l(1.0 + 0.5 * j as f64) } else { l(0.25) })
                .collect()
        })
        .collect();
    out.push(("quadratic".into(), SymbolSpec::quadratic(q).expect("valid")));
    out.push((
        "drift".into(),
        SymbolSpec::drift((0..n).map(|j| l(0.75 - 0.5 * j as f64)).collect()).expect("valid"),
    ));
    out.push((
        "relativistic".into(),
        SymbolSpec::relativistic(l(1.0), n).expect("valid"),
    ));
    out.push(("log_euclid".into(), SymbolSpec::log_euclid(n).expect("valid")));
    let combo = SymbolSpec::combination(
        vec![
            (l(0.5), SymbolSpec::power(l(2.0), n).expect("valid")),
            (l(0.3), SymbolSpec::power(l(1.0), n).expect("valid")),
            (
                l(1.0),
                SymbolSpec::drift((0..n).map(|_| l(-0.4)).collect()).expect("valid"),
            ),
        ],
        n,
    )
    .expect("valid");
    out.push(("combination".into(), combo));
    if n >= 2 {
        for axis in 0..n {
            out.push((
                format!("block_{axis}"),
                SymbolSpec::block(SymbolSpec::power(l(2.0), 1).expect("valid"), axis, n)
                    .expect("valid"),
            ));
        }
    }
    out
}
