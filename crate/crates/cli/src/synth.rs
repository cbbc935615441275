//! Synthetic stand-ins for the two rainfall series, regenerated bit-for-bit
//! from fixed seeds.

use robustge::{ge_sample, GeParams};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// 66 years, five missing, one extreme and one heavy outlier.
    Monthly,
    /// 51 years, one missing, one moderate outlier, large shape parameter.
    Annual,
}

impl SynthKind {
    pub const ALL: [SynthKind; 2] = [SynthKind::Monthly, SynthKind::Annual];

    pub fn file_name(self) -> &'static str {
        match self {
            SynthKind::Monthly => "synthetic_monthly.csv",
            SynthKind::Annual => "synthetic_annual.csv",
        }
    }

    pub fn seed(self) -> u64 {
        match self {
            SynthKind::Monthly => 19_320_001,
            SynthKind::Annual => 19_370_001,
        }
    }
}

impl std::str::FromStr for SynthKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "monthly" => Ok(SynthKind::Monthly),
            "annual" => Ok(SynthKind::Annual),
            _ => Err(format!("unknown dataset {s:?} (monthly or annual)")),
        }
    }
}

/// CSV text of the dataset.
pub fn synth_csv(kind: SynthKind) -> String {
    let (params, first_year, years, missing, outliers): (_, u32, usize, &[usize], &[(usize, f64)]) =
        match kind {
            SynthKind::Monthly => (
                GeParams::new(0.1208, 1.8484).expect("valid"),
                1932,
                66,
                &[5, 17, 29, 40, 58],
                // 1979 carries a return level of 1e-5 exceedance
                &[(22, 1.0 - 1e-3), (47, 1.0 - 1e-5)],
            ),
            SynthKind::Annual => (
                GeParams::new(0.1021, 44.6385).expect("valid"),
                1932,
                51,
                &[33],
                &[(9, 1.0 - 1e-3)],
            ),
        };
    let mut values = ge_sample(years, &params, kind.seed())
        .expect("valid sample size")
        .values()
        .to_vec();
    for &(i, p) in outliers {
        values[i] = params.quantile(p);
    }
    let mut out = String::from("time,value\n");
    for (i, v) in values.iter().enumerate() {
        let year = first_year + i as u32;
        if missing.contains(&i) {
            let _ = writeln!(out, "{year},NA");
        } else {
            let _ = writeln!(out, "{year},{v:.4}");
        }
    }
    out
}
