use nalgebra::DMatrix;

use super::basis::Basis;
use crate::error::{Error, Result};
use crate::C64;

const NODE_CHUNK: usize = 2048;

/// `Gᵢⱼ = Σₖ wₖ ēᵢ(zₖ) eⱼ(zₖ)` over weighted points `(zₖ, wₖ)`, with `eᵢ` the
/// basis functions stripped of their prefactor `V`; weights carry `|V|²`.
///
/// Split into real products `VrᵀVr + ViᵀVi + i(VrᵀVi − ViᵀVr)` per chunk of
/// points; chunk partials are added in chunk order.
pub fn assemble_gram(basis: &Basis, points: &[(C64, f64)]) -> Result<DMatrix<C64>> {
    if points.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::WeightSingularity);
    }
    let n = basis.len();
    let partials = crate::par::map_chunks(points, NODE_CHUNK, |chunk| {
        let mut vr = DMatrix::<f64>::zeros(chunk.len(), n);
        let mut vi = DMatrix::<f64>::zeros(chunk.len(), n);
        let mut row = vec![C64::new(0.0, 0.0); n];
        for (k, &(z, w)) in chunk.iter().enumerate() {
            basis.cofactor_values(z, &mut row);
            let s = w.sqrt();
            for (j, v) in row.iter().enumerate() {
                vr[(k, j)] = v.re * s;
                vi[(k, j)] = v.im * s;
            }
        }
        let re = vr.tr_mul(&vr) + vi.tr_mul(&vi);
        let im = vr.tr_mul(&vi) - vi.tr_mul(&vr);
        (re, im)
    });
    let mut re = DMatrix::<f64>::zeros(n, n);
    let mut im = DMatrix::<f64>::zeros(n, n);
    for (r, i) in partials {
        re += r;
        im += i;
    }
    let mut g = DMatrix::<C64>::from_fn(n, n, |i, j| C64::new(re[(i, j)], im[(i, j)]));
    for i in 0..n {
        g[(i, i)].im = 0.0;
        for j in i + 1..n {
            let h = 0.5 * (g[(i, j)] + g[(j, i)].conj());
            g[(i, j)] = h;
            g[(j, i)] = h.conj();
        }
    }
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::WeightSingularity);
    }
    Ok(g)
}
