//! Model-free implied variance from a single-expiry option chain, and the
//! near/next-term blend to a constant 30-day horizon.
//!
//! For one expiry with time to expiry `T`, forward `F`, rate `R`:
//!
//! ```text
//! σ² = 100² · [ (2/T) Σ ΔK_i/K_i² · e^{RT} · Q(K_i)  −  (1/T) (F/K0 − 1)² ]
//! ```
//!
//! `K0` is the largest strike not above `F`; puts are used below it, calls
//! above, and the average of both at `K0`. Moving away from `K0` on either
//! side, a strike with a zero bid is skipped and two zero bids in a row end
//! that side. `ΔK` is the centred half-difference of neighbouring selected
//! strikes and the one-sided difference at the ends.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

/// Calendar days per year for expiry times and the 30-day annualization.
pub const CALENDAR_DAYS: f64 = 365.0;
pub const TARGET_DAYS: f64 = 30.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImpliedError {
    #[error("option chain has no quotes")]
    EmptyChain,
    #[error("no strike at or below the forward {0}")]
    NoStrikeBelowForward(f64),
    #[error("need at least two strikes to compute spacing")]
    TooFewStrikes,
    #[error("every candidate strike was excluded by zero bids")]
    ZeroBidRun,
    #[error("duplicate {right:?} quote at strike {strike}")]
    DuplicateStrike { strike: f64, right: OptionRight },
    #[error("invalid quote at strike {strike}: {reason}")]
    InvalidQuote { strike: f64, reason: String },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("replication sum gave negative variance {0}")]
    NegativeVariance(f64),
    #[error("target horizon {target_years} not bracketed by [{near_years}, {next_years}]")]
    InvalidBracket {
        near_years: f64,
        next_years: f64,
        target_years: f64,
    },
    #[error("chain file line {line}: {reason}")]
    Format { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, ImpliedError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionRight {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionQuote {
    pub strike: f64,
    pub right: OptionRight,
    pub bid: f64,
    pub ask: f64,
}

impl OptionQuote {
    pub fn new(strike: f64, right: OptionRight, bid: f64, ask: f64) -> Self {
        OptionQuote {
            strike,
            right,
            bid,
            ask,
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.bid + self.ask)
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: &str| ImpliedError::InvalidQuote {
            strike: self.strike,
            reason: reason.to_string(),
        };
        if !(self.strike > 0.0) || !self.strike.is_finite() {
            return Err(bad("strike must be positive"));
        }
        if !(self.bid >= 0.0) || !self.bid.is_finite() {
            return Err(bad("bid must be non-negative"));
        }
        if !(self.ask >= self.bid) || !self.ask.is_finite() {
            return Err(bad("ask below bid"));
        }
        Ok(())
    }
}

/// Quotes for a single expiry plus the rate and forward used to price them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionChainSnapshot {
    expiry_time_years: f64,
    forward: f64,
    risk_free_rate: f64,
    quotes: Vec<OptionQuote>,
    /// Listed strike increment, used as `ΔK` when only one strike survives.
    strike_increment: Option<f64>,
}

impl OptionChainSnapshot {
    pub fn new(
        expiry_time_years: f64,
        forward: f64,
        risk_free_rate: f64,
        mut quotes: Vec<OptionQuote>,
    ) -> Result<Self> {
        if !(expiry_time_years > 0.0) || !expiry_time_years.is_finite() {
            return Err(ImpliedError::InvalidChain(format!(
                "expiry must be positive, got {expiry_time_years}"
            )));
        }
        if !(forward > 0.0) || !forward.is_finite() {
            return Err(ImpliedError::InvalidChain(format!(
                "forward must be positive, got {forward}"
            )));
        }
        if !risk_free_rate.is_finite() {
            return Err(ImpliedError::InvalidChain("rate must be finite".into()));
        }
        for q in &quotes {
            q.validate()?;
        }
        quotes.sort_by(|a, b| a.strike.total_cmp(&b.strike).then(a.right.cmp(&b.right)));
        for w in quotes.windows(2) {
            if w[0].strike == w[1].strike && w[0].right == w[1].right {
                return Err(ImpliedError::DuplicateStrike {
                    strike: w[0].strike,
                    right: w[0].right,
                });
            }
        }
        Ok(OptionChainSnapshot {
            expiry_time_years,
            forward,
            risk_free_rate,
            quotes,
            strike_increment: None,
        })
    }

    pub fn with_strike_increment(mut self, increment: f64) -> Self {
        self.strike_increment = Some(increment);
        self
    }

    pub fn expiry_time_years(&self) -> f64 {
        self.expiry_time_years
    }

    pub fn forward(&self) -> f64 {
        self.forward
    }

    pub fn risk_free_rate(&self) -> f64 {
        self.risk_free_rate
    }

    pub fn quotes(&self) -> &[OptionQuote] {
        &self.quotes
    }

    pub fn strike_increment(&self) -> Option<f64> {
        self.strike_increment
    }

    /// Distinct strikes in ascending order.
    pub fn strikes(&self) -> Vec<f64> {
        let mut ks: Vec<f64> = self.quotes.iter().map(|q| q.strike).collect();
        ks.dedup();
        ks
    }

    /// Parses the chain snapshot text format:
    ///
    /// ```text
    /// # forward = 100.0
    /// # rate = 0.01
    /// # increment = 5        (optional)
    /// expiry_days,right,strike,bid,ask
    /// 30,C,100,2.10,2.20
    /// 30,P,100,1.90,2.00
    /// ```
    ///
    /// Header keys accept `=` or `:`. Every row must share one
    /// `expiry_days`; time to expiry is `expiry_days / 365`. Fields may be
    /// separated by commas or tabs.
    pub fn from_reader<R: Read>(raw: R) -> Result<Self> {
        let reader = BufReader::new(raw);
        let mut forward = None;
        let mut rate = 0.0;
        let mut increment = None;
        let mut expiry_days: Option<f64> = None;
        let mut quotes = Vec::new();
        let mut seen_header = false;
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let fmt_err = |reason: String| ImpliedError::Format {
                line: line_no,
                reason,
            };
            let line = line.map_err(|e| fmt_err(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let Some((key, value)) = meta.split_once(['=', ':']) else {
                    continue;
                };
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| fmt_err(format!("bad number in `{line}`")))?;
                match key.trim().to_ascii_lowercase().as_str() {
                    "forward" => forward = Some(value),
                    "rate" => rate = value,
                    "increment" => increment = Some(value),
                    other => return Err(fmt_err(format!("unknown header key `{other}`"))),
                }
                continue;
            }
            let fields: Vec<&str> = line.split([',', '\t']).map(str::trim).collect();
            if !seen_header {
                let expected = ["expiry_days", "right", "strike", "bid", "ask"];
                let got: Vec<String> = fields.iter().map(|f| f.to_ascii_lowercase()).collect();
                if got != expected {
                    return Err(fmt_err(format!(
                        "expected header `{}`",
                        expected.join(",")
                    )));
                }
                seen_header = true;
                continue;
            }
            if fields.len() != 5 {
                return Err(fmt_err(format!("expected 5 fields, found {}", fields.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| fmt_err(format!("bad number `{s}`")))
            };
            let days = num(fields[0])?;
            match expiry_days {
                None => expiry_days = Some(days),
                Some(d) if d != days => {
                    return Err(fmt_err(format!(
                        "mixed expiries {d} and {days} in one snapshot"
                    )))
                }
                _ => {}
            }
            let right = match fields[1].to_ascii_uppercase().as_str() {
                "C" | "CALL" => OptionRight::Call,
                "P" | "PUT" => OptionRight::Put,
                other => return Err(fmt_err(format!("unknown option right `{other}`"))),
            };
            quotes.push(OptionQuote::new(
                num(fields[2])?,
                right,
                num(fields[3])?,
                num(fields[4])?,
            ));
        }
        let forward = forward.ok_or_else(|| ImpliedError::Format {
            line: 0,
            reason: "missing `# forward` header".into(),
        })?;
        let days = expiry_days.ok_or(ImpliedError::EmptyChain)?;
        let chain = OptionChainSnapshot::new(days / CALENDAR_DAYS, forward, rate, quotes)?;
        Ok(match increment {
            Some(inc) => chain.with_strike_increment(inc),
            None => chain,
        })
    }
}

/// Largest strike not above the forward.
pub fn select_k0(chain: &OptionChainSnapshot) -> Result<f64> {
    if chain.quotes.is_empty() {
        return Err(ImpliedError::EmptyChain);
    }
    chain
        .quotes
        .iter()
        .map(|q| q.strike)
        .filter(|&k| k <= chain.forward)
        .fold(None, |best: Option<f64>, k| Some(best.map_or(k, |b| b.max(k))))
        .ok_or(ImpliedError::NoStrikeBelowForward(chain.forward))
}

/// `ΔK` at position `i` of an ascending strike list.
pub fn strike_spacing(strikes: &[f64], i: usize) -> Result<f64> {
    let n = strikes.len();
    if n < 2 {
        return Err(ImpliedError::TooFewStrikes);
    }
    Ok(if i == 0 {
        strikes[1] - strikes[0]
    } else if i >= n - 1 {
        strikes[n - 1] - strikes[n - 2]
    } else {
        0.5 * (strikes[i + 1] - strikes[i - 1])
    })
}

/// One strike's share of the replication sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub strike: f64,
    pub delta_k: f64,
    /// Bid-ask midpoint (put/call average at `K0`).
    pub q: f64,
    /// `ΔK/K² · e^{RT} · Q`
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpliedVarianceResult {
    /// Annualized variance in percent².
    pub variance: f64,
    pub k0: f64,
    pub contributions: Vec<Contribution>,
    /// `100² · (1/T)(F/K0 − 1)²`, already subtracted from `variance`.
    pub forward_correction: f64,
    pub expiry_time_years: f64,
}

impl ImpliedVarianceResult {
    /// Recomputes the variance from the stored contributions.
    pub fn recompute(&self) -> f64 {
        let sum: f64 = self.contributions.iter().map(|c| c.term).sum();
        1e4 * 2.0 / self.expiry_time_years * sum - self.forward_correction
    }

    /// Volatility in percentage points.
    pub fn vol(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn term(&self) -> TermVariance {
        TermVariance {
            variance: self.variance,
            expiry_years: self.expiry_time_years,
        }
    }
}

/// Out-of-the-money quotes walked outward from `K0`, honouring the
/// zero-bid truncation rule.
fn select_side<'a, I>(strikes: I, quotes: &BTreeMap<u64, [Option<OptionQuote>; 2]>, slot: usize) -> Vec<(f64, f64)>
where
    I: Iterator<Item = &'a u64>,
{
    let mut out = Vec::new();
    let mut zero_run = 0;
    for key in strikes {
        let Some(q) = quotes[key][slot] else { continue };
        if q.bid == 0.0 {
            zero_run += 1;
            if zero_run >= 2 {
                break;
            }
            continue;
        }
        zero_run = 0;
        out.push((q.strike, q.mid()));
    }
    out
}

pub fn implied_variance(chain: &OptionChainSnapshot) -> Result<ImpliedVarianceResult> {
    let k0 = select_k0(chain)?;
    // strikes are finite positives, so the bit pattern orders them correctly
    let mut by_strike: BTreeMap<u64, [Option<OptionQuote>; 2]> = BTreeMap::new();
    for q in &chain.quotes {
        let slot = match q.right {
            OptionRight::Put => 0,
            OptionRight::Call => 1,
        };
        by_strike.entry(q.strike.to_bits()).or_default()[slot] = Some(*q);
    }
    let k0_key = k0.to_bits();
    let puts = select_side(by_strike.range(..k0_key).rev().map(|(k, _)| k), &by_strike, 0);
    let calls = select_side(
        by_strike.range(k0_key + 1..).map(|(k, _)| k),
        &by_strike,
        1,
    );
    let at_k0 = by_strike[&k0_key];
    let k0_mid = match at_k0 {
        [Some(p), Some(c)] => 0.5 * (p.mid() + c.mid()),
        [Some(p), None] => p.mid(),
        [None, Some(c)] => c.mid(),
        [None, None] => unreachable!("k0 is drawn from quoted strikes"),
    };

    let mut selected: Vec<(f64, f64)> = puts.into_iter().rev().collect();
    selected.push((k0, k0_mid));
    selected.extend(calls);
    if selected.iter().all(|&(_, q)| q <= 0.0) {
        return Err(ImpliedError::ZeroBidRun);
    }

    let t = chain.expiry_time_years;
    let growth = (chain.risk_free_rate * t).exp();
    let strikes: Vec<f64> = selected.iter().map(|s| s.0).collect();
    let mut contributions = Vec::with_capacity(selected.len());
    for (i, &(k, q)) in selected.iter().enumerate() {
        let delta_k = match strike_spacing(&strikes, i) {
            Ok(d) => d,
            Err(e) => chain.strike_increment.ok_or(e)?,
        };
        contributions.push(Contribution {
            strike: k,
            delta_k,
            q,
            term: delta_k / (k * k) * growth * q,
        });
    }
    let forward_correction = 1e4 / t * (chain.forward / k0 - 1.0).powi(2);
    let sum: f64 = contributions.iter().map(|c| c.term).sum();
    let variance = 1e4 * 2.0 / t * sum - forward_correction;
    if variance < 0.0 {
        return Err(ImpliedError::NegativeVariance(variance));
    }
    Ok(ImpliedVarianceResult {
        variance,
        k0,
        contributions,
        forward_correction,
        expiry_time_years: t,
    })
}

/// Annualized variance (percent²) for one expiry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermVariance {
    pub variance: f64,
    pub expiry_years: f64,
}

/// Interpolates total variance `T·σ²(T)` linearly to `target_days` and
/// annualizes back, with near weight `(T_next − T*)/(T_next − T_near)`.
/// Returns annualized variance in percent².
pub fn blend_terms(
    near: TermVariance,
    next: TermVariance,
    target_days: f64,
    allow_extrapolation: bool,
) -> Result<f64> {
    let target = target_days / CALENDAR_DAYS;
    let (t1, t2) = (near.expiry_years, next.expiry_years);
    let bracket = ImpliedError::InvalidBracket {
        near_years: t1,
        next_years: t2,
        target_years: target,
    };
    if t1 == t2 {
        return if t1 == target || (allow_extrapolation && near.variance == next.variance) {
            Ok(near.variance)
        } else {
            Err(bracket)
        };
    }
    let bracketed = t1 <= target && target <= t2;
    if !bracketed && !allow_extrapolation {
        return Err(bracket);
    }
    let w = (t2 - target) / (t2 - t1);
    let total = w * t1 * near.variance + (1.0 - w) * t2 * next.variance;
    Ok(total / target)
}

/// Forward implied by put-call parity at the strike where `|C − P|` is
/// smallest: `F = K + e^{RT}(C − P)`. Returns `(strike, forward)`.
pub fn forward_from_parity(quotes: &[OptionQuote], expiry_years: f64, rate: f64) -> Result<(f64, f64)> {
    let mut pairs: BTreeMap<u64, [Option<f64>; 2]> = BTreeMap::new();
    for q in quotes {
        let slot = match q.right {
            OptionRight::Put => 0,
            OptionRight::Call => 1,
        };
        pairs.entry(q.strike.to_bits()).or_default()[slot] = Some(q.mid());
    }
    pairs
        .iter()
        .filter_map(|(k, v)| match v {
            [Some(p), Some(c)] => Some((f64::from_bits(*k), c - p)),
            _ => None,
        })
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(k, diff)| (k, k + (rate * expiry_years).exp() * diff))
        .ok_or(ImpliedError::EmptyChain)
}

fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Discounted Black (forward-based) price of a European option.
pub fn black_price(right: OptionRight, forward: f64, strike: f64, vol: f64, t: f64, rate: f64) -> f64 {
    let disc = (-rate * t).exp();
    let sd = vol * t.sqrt();
    let d1 = ((forward / strike).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    match right {
        OptionRight::Call => disc * (forward * norm_cdf(d1) - strike * norm_cdf(d2)),
        OptionRight::Put => disc * (strike * norm_cdf(-d2) - forward * norm_cdf(-d1)),
    }
}

/// Chain with zero-spread quotes priced under a flat Black volatility.
pub fn flat_vol_chain(
    forward: f64,
    vol: f64,
    expiry_years: f64,
    rate: f64,
    strikes: &[f64],
) -> Result<OptionChainSnapshot> {
    let quotes = strikes
        .iter()
        .flat_map(|&k| {
            [OptionRight::Put, OptionRight::Call].map(|right| {
                let p = black_price(right, forward, k, vol, expiry_years, rate);
                OptionQuote::new(k, right, p, p)
            })
        })
        .collect();
    OptionChainSnapshot::new(expiry_years, forward, rate, quotes)
}
