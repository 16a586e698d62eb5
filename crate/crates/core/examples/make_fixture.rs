//! Regenerates `fixtures/loan_loss_quarterly.csv`.
//!
//! The covariate columns are approximate reconstructions of the public
//! quarterly series for April 2011 through April 2020 (prior-month averages
//! for the rates and claims, population and sex ratio at the quarter start),
//! lightly calibrated so the fitted design has realistic collinearity. Loss is
//! synthetic: the reference coefficient vector applied to the design plus a
//! seeded noise vector projected onto the residual space and scaled to a fixed
//! residual sum of squares, so OLS recovers the reference coefficients.
//!
//! Usage: `cargo run -p twinreg --example make_fixture [OUTPUT]`

use std::fs::File;
use std::io::{BufWriter, Write};

use chrono::{Months, NaiveDate};
use twinreg::data::{apply_transforms, Observation};
use twinreg::kernels::{draw_normal, RandomSource};
use twinreg::ols::{build_design, fit_ols, DesignMatrix};

const REFERENCE_BETA: [f64; 8] = [-500.0, 0.106, -0.0810, -18.5, 577.0, -0.995, 0.967, 0.0551];
const TARGET_SSE: f64 = 0.12596;
const NOISE_SEED: u64 = 2011;

const TOTAL_POP: [f64; 37] = [
    310982610.0,
    311625028.0,
    312261945.0,
    312658582.0,
    313049719.0,
    313670136.0,
    314285053.0,
    314659689.0,
    315028825.0,
    315627242.0,
    316220157.0,
    316572793.0,
    316919928.0,
    317496344.0,
    318067259.0,
    318397893.0,
    318723028.0,
    319277442.0,
    319826356.0,
    320134990.0,
    320438124.0,
    320970537.0,
    321497451.0,
    321784084.0,
    322065217.0,
    322575629.0,
    323080542.0,
    323345174.0,
    323604306.0,
    324092718.0,
    324575630.0,
    324818261.0,
    325055392.0,
    325521803.0,
    325982714.0,
    326203345.0,
    326418475.0,
];
const RATIO: [f64; 37] = [
    0.970305, 0.9703819, 0.9704557, 0.9705599, 0.970661, 0.9707257, 0.9707873, 0.9708792, 0.9709681, 0.9710206,
    0.97107, 0.9711497, 0.9712264, 0.9712666, 0.9713037, 0.9713712, 0.9714357, 0.9714637, 0.9714886, 0.9715439,
    0.9715961, 0.9716119, 0.9716246, 0.9716676, 0.9717076, 0.9717112, 0.9717116, 0.9717425, 0.9717702, 0.9717616,
    0.9717498, 0.9717684, 0.971784, 0.971763, 0.9717391, 0.9717455, 0.9717488,
];
const AV_CLAIMS: [f64; 37] = [
    3669000.0, 3750000.0, 3844000.0, 3640000.0, 3256000.0, 3310000.0, 3404000.0, 3220000.0, 2936000.0, 2980000.0,
    3014000.0, 2860000.0, 2686000.0, 2560000.0, 2584000.0, 2410000.0, 2186000.0, 2260000.0, 2374000.0, 2230000.0,
    2056000.0, 2140000.0, 2194000.0, 2050000.0, 1896000.0, 1950000.0, 2044000.0, 1920000.0, 1746000.0, 1720000.0,
    1794000.0, 1700000.0, 1576000.0, 1700000.0, 1804000.0, 1730000.0, 2896000.0,
];
const APLIR: [f64; 37] = [
    3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25, 3.25,
    3.35, 3.5, 3.5, 3.5, 3.62, 3.88, 4.13, 4.25, 4.38, 4.57, 4.87, 5.06, 5.35, 5.5, 5.5, 5.15, 4.75, 3.78,
];
const FFR: [f64; 37] = [
    0.14, 0.09, 0.08, 0.07, 0.13, 0.16, 0.14, 0.16, 0.14, 0.09, 0.08, 0.09, 0.08, 0.1, 0.09, 0.12, 0.11, 0.13, 0.14,
    0.24, 0.36, 0.38, 0.4, 0.54, 0.79, 1.04, 1.15, 1.3, 1.51, 1.82, 1.95, 2.27, 2.41, 2.38, 2.04, 1.55, 0.65,
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures/loan_loss_quarterly.csv".into());
    let start = NaiveDate::from_ymd_opt(2011, 4, 1).expect("valid date");
    let dates: Vec<NaiveDate> = (0..37).map(|q| start + Months::new(3 * q)).collect();

    // Loss is filled in after the design is known.
    let mut obs: Vec<Observation> = dates
        .iter()
        .enumerate()
        .map(|(i, &date)| Observation {
            date,
            loss: 0.0,
            total_pop: TOTAL_POP[i],
            ratio: RATIO[i],
            aplir: APLIR[i],
            ffr: FFR[i],
            av_claims: AV_CLAIMS[i],
        })
        .collect();
    let design = build_design(&apply_transforms(&obs)?)?;
    let signal = design.x().mul_vec(&REFERENCE_BETA);

    let mut rs = RandomSource::new(NOISE_SEED);
    let z: Vec<f64> = (0..obs.len())
        .map(|_| draw_normal(&mut rs, 0.0, 1.0))
        .collect::<Result<_, _>>()?;
    let regressors: Vec<Vec<f64>> = (1..design.p()).map(|j| design.x().column(j).to_vec()).collect();
    let names: Vec<&str> = design.names()[1..].iter().map(String::as_str).collect();
    let projected = fit_ols(&DesignMatrix::new(&regressors, &names, z)?)?.residuals;
    let norm = projected.iter().map(|e| e * e).sum::<f64>().sqrt();
    let scale = TARGET_SSE.sqrt() / norm;

    for ((o, s), e) in obs.iter_mut().zip(&signal).zip(&projected) {
        o.loss = ((s + scale * e) * 1e6).round() / 1e6;
    }

    let mut w = BufWriter::new(File::create(&out)?);
    writeln!(w, "date,loss,total_pop,ratio,aplir,ffr,av_claims")?;
    for o in &obs {
        writeln!(
            w,
            "{},{:.6},{},{},{},{},{}",
            o.date, o.loss, o.total_pop, o.ratio, o.aplir, o.ffr, o.av_claims
        )?;
    }
    w.flush()?;
    eprintln!("wrote {} rows to {out}", obs.len());
    Ok(())
}
