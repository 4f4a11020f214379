//! CSV exports: band structure and dispersion tables.

use std::fmt::Write;

use crate::semiclassics::{band_width_lower, bs_levels_lower, dispersion_upper, lower_dispersion_shape};
use crate::{BlochBand1D, Potential1D, Sturm1dError};

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// Rows nu,E_minus,E_plus,E_bs,width_formula. Formula columns are empty where
/// the band is outside the lower domain.
pub fn band_structure_csv(v: &Potential1D, h: f64, bands: &[BlochBand1D]) -> Result<String, Sturm1dError> {
    let levels = bs_levels_lower(v, h)?;
    let mut out = String::from("nu,E_minus,E_plus,E_bs,width_formula\n");
    for b in bands {
        let bs = levels.get(b.index).copied();
        let width = bs.and_then(|_| band_width_lower(v, h, b.index).ok()).map(|w| w.width);
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{},{}",
            b.index,
            b.e_minus,
            b.e_plus,
            opt(bs),
            opt(width)
        );
    }
    Ok(out)
}

/// Semiclassical E_ν(q): the upper-domain dispersion above v_max + δ, the
/// lower-domain shape around E_{1,ν} below v_max − δ, None in between.
pub fn dispersion_formula(v: &Potential1D, h: f64, nu: usize, q: f64) -> Option<f64> {
    if let Ok(e) = dispersion_upper(v, h, nu, q) {
        return Some(e);
    }
    let w = band_width_lower(v, h, nu).ok()?;
    Some(w.energy + 0.5 * w.width * (lower_dispersion_shape(nu, q) - 1.0))
}

/// Rows nu,q,E_formula,E_oracle over each band's dispersion samples.
pub fn dispersion_csv(v: &Potential1D, h: f64, bands: &[BlochBand1D]) -> String {
    let mut out = String::from("nu,q,E_formula,E_oracle\n");
    for b in bands {
        for &(q, e) in &b.dispersion {
            let _ = writeln!(
                out,
                "{},{:.16e},{},{:.16e}",
                b.index,
                q,
                opt(dispersion_formula(v, h, b.index, q)),
                e
            );
        }
    }
    out
}
