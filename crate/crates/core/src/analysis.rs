//! Post-hoc analysis of recorded series: power spectra, peaks, histograms
//! and correlation.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const MIN_PERIODOGRAM_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    fn weights(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; len],
            Window::Hann => (0..len)
                .map(|i| {
                    let x = std::f64::consts::PI * i as f64 / len as f64;
                    // periodic Hann
                    x.sin().powi(2)
                })
                .collect(),
        }
    }
}

impl std::str::FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" | "none" => Ok(Window::Rectangular),
            "hann" | "hanning" => Ok(Window::Hann),
            other => Err(format!("unknown window '{other}' (expected rectangular or hann)")),
        }
    }
}

/// One-sided power spectrum. Frequencies are in cycles per unit time.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        if self.frequencies.len() > 1 {
            self.frequencies[1] - self.frequencies[0]
        } else {
            0.0
        }
    }
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Periodogram of a uniformly sampled series.
///
/// The mean is removed, the window applied, and `|X_k|^2 / M^2` folded onto
/// non-negative frequencies, so that the bins sum to the mean square of the
/// windowed series (its variance for the rectangular window).
pub fn periodogram(samples: &[f64], sample_interval: f64, window: Window) -> Result<Spectrum> {
    let m = samples.len();
    if m < MIN_PERIODOGRAM_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_PERIODOGRAM_SAMPLES,
            got: m,
        });
    }
    check_finite(samples)?;
    if !(sample_interval.is_finite() && sample_interval > 0.0) {
        return Err(Error::domain("sample interval", sample_interval, "> 0"));
    }
    let mean = samples.iter().sum::<f64>() / m as f64;
    let w = window.weights(m);
    let mut buf: Vec<Complex64> = samples
        .iter()
        .zip(&w)
        .map(|(x, wi)| Complex64::new((x - mean) * wi, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let half = m / 2;
    let scale = 1.0 / (m as f64 * m as f64);
    let power = (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() * scale;
            let mirrored = k != 0 && !(m.is_multiple_of(2) && k == half);
            if mirrored {
                2.0 * p
            } else {
                p
            }
        })
        .collect();
    let df = 1.0 / (m as f64 * sample_interval);
    let frequencies = (0..=half).map(|k| k as f64 * df).collect();
    Ok(Spectrum { frequencies, power })
}

/// Averaged periodogram over half-overlapping segments of `segment_len` samples.
pub fn welch(samples: &[f64], sample_interval: f64, segment_len: usize, window: Window) -> Result<Spectrum> {
    if segment_len < MIN_PERIODOGRAM_SAMPLES || segment_len > samples.len() {
        return Err(Error::domain(
            "segment length",
            segment_len,
            format!("{MIN_PERIODOGRAM_SAMPLES}..={}", samples.len()),
        ));
    }
    let hop = (segment_len / 2).max(1);
    let mut acc: Option<Spectrum> = None;
    let mut count = 0usize;
    let mut start = 0;
    while start + segment_len <= samples.len() {
        let s = periodogram(&samples[start..start + segment_len], sample_interval, window)?;
        match acc.as_mut() {
            None => acc = Some(s),
            Some(a) => a.power.iter_mut().zip(&s.power).for_each(|(x, y)| *x += y),
        }
        count += 1;
        start += hop;
    }
    let mut spec = acc.expect("at least one segment");
    spec.power.iter_mut().for_each(|p| *p /= count as f64);
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub frequency: f64,
    pub power: f64,
    /// Set when the spectrum has no power outside DC.
    pub degenerate: bool,
}

/// Highest non-DC bin; ties go to the lower frequency.
pub fn dominant_frequency(spec: &Spectrum) -> Result<Peak> {
    dominant_in_band(spec, 0.0, f64::INFINITY)
}

/// Highest non-DC bin with `f_min <= f <= f_max`.
pub fn dominant_in_band(spec: &Spectrum, f_min: f64, f_max: f64) -> Result<Peak> {
    let mut best: Option<(usize, f64)> = None;
    for (k, (&f, &p)) in spec.frequencies.iter().zip(&spec.power).enumerate().skip(1) {
        if f < f_min || f > f_max {
            continue;
        }
        match best {
            Some((_, bp)) if p <= bp => {}
            _ => best = Some((k, p)),
        }
    }
    let (k, p) = best.ok_or(Error::EmptySpectrum)?;
    Ok(Peak {
        frequency: spec.frequencies[k],
        power: p,
        degenerate: p == 0.0,
    })
}

/// Local maxima (non-DC), strongest first.
pub fn top_peaks(spec: &Spectrum, count: usize) -> Vec<Peak> {
    let p = &spec.power;
    let mut peaks: Vec<Peak> = (1..p.len())
        .filter(|&k| {
            let left = p[k - 1];
            let right = if k + 1 < p.len() { p[k + 1] } else { f64::NEG_INFINITY };
            p[k] > 0.0 && p[k] > left && p[k] >= right
        })
        .map(|k| Peak {
            frequency: spec.frequencies[k],
            power: p[k],
            degenerate: false,
        })
        .collect();
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power).then(a.frequency.total_cmp(&b.frequency)));
    peaks.truncate(count);
    peaks
}

/// Frequency span of the contiguous bins around `peak` with power at least half its maximum.
pub fn half_maximum_span(spec: &Spectrum, peak: &Peak) -> f64 {
    let Some(k) = spec.frequencies.iter().position(|&f| f == peak.frequency) else {
        return 0.0;
    };
    let half = 0.5 * spec.power[k];
    let mut lo = k;
    while lo > 1 && spec.power[lo - 1] >= half {
        lo -= 1;
    }
    let mut hi = k;
    while hi + 1 < spec.power.len() && spec.power[hi + 1] >= half {
        hi += 1;
    }
    spec.frequencies[hi] - spec.frequencies[lo] + spec.resolution()
}

/// Equal-width histogram normalized as a probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` edges.
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    /// Mean of the piecewise-constant density.
    pub fn mean(&self) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.densities)
            .map(|(e, d)| 0.5 * (e[0] + e[1]) * d * (e[1] - e[0]))
            .sum()
    }
}

/// Histogram over `[min, max]`. If all samples are equal the result is a
/// single unit-width bin centred on that value.
pub fn histogram(samples: &[f64], bins: usize) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::domain("bins", bins, ">= 2"));
    }
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    check_finite(samples)?;
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Ok(Histogram {
            edges: vec![lo - 0.5, lo + 0.5],
            densities: vec![1.0],
        });
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let total = samples.len() as f64;
    let edges = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + i as f64 * width })
        .collect();
    let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    Ok(Histogram { edges, densities })
}

pub fn pearson_correlation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: a.len(),
        });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Checks that `times` are uniformly spaced within `rel_tol` of the mean spacing
/// and returns that spacing.
pub fn uniform_spacing(times: &[f64], rel_tol: f64) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: times.len(),
        });
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::domain("sample spacing", dt, "> 0"));
    }
    for (i, w) in times.windows(2).enumerate() {
        let d = w[1] - w[0];
        // jitter relative to the sample spacing, with room for rounding of large t
        let slack = rel_tol * dt + 4.0 * f64::EPSILON * w[1].abs();
        if (d - dt).abs() > slack {
            return Err(Error::domain(
                "sample spacing",
                format!("{d} at row {}", i + 1),
                format!("{dt} (uniform sampling required)"),
            ));
        }
    }
    Ok(dt)
}
