//! OR-Library style whitespace-separated instance files.

use thiserror::Error;

use super::MkpInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("token {offset}: stream ended while reading {field}")]
    Truncated { offset: usize, field: String },
    #[error("token {offset}: {field}: cannot parse {token:?}")]
    Invalid { offset: usize, field: String, token: String },
    #[error("token {offset}: trailing data {token:?} after the last instance")]
    Trailing { offset: usize, token: String },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Utf8 => None,
            ParseError::Truncated { offset, .. }
            | ParseError::Invalid { offset, .. }
            | ParseError::Trailing { offset, .. } => Some(*offset),
        }
    }
}

struct Tokens<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(bytes: &'a [u8]) -> Result<Self, ParseError> {
        let text = std::str::from_utf8(bytes).map_err(|_| ParseError::Utf8)?;
        Ok(Self {
            toks: text.split_whitespace().collect(),
            pos: 0,
        })
    }

    fn next<T: std::str::FromStr>(&mut self, field: impl Fn() -> String) -> Result<T, ParseError> {
        let offset = self.pos;
        let tok = *self.toks.get(offset).ok_or_else(|| ParseError::Truncated {
            offset,
            field: field(),
        })?;
        self.pos += 1;
        tok.parse().map_err(|_| ParseError::Invalid {
            offset,
            field: field(),
            token: tok.to_string(),
        })
    }

    /// An integer that some files write with a decimal point (`1234.0`).
    fn next_integral(&mut self, field: impl Fn() -> String) -> Result<i64, ParseError> {
        let offset = self.pos;
        let v: f64 = self.next(&field)?;
        if v.fract() != 0.0 || !v.is_finite() {
            return Err(ParseError::Invalid {
                offset,
                field: field(),
                token: self.toks[offset].to_string(),
            });
        }
        Ok(v as i64)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(ParseError::Trailing {
                offset: self.pos,
                token: t.to_string(),
            }),
        }
    }
}

/// `K`, then per instance `n m opt`, `c[1..n]`, `A` row-major, `b[1..m]`.
/// An optimum of 0 means unknown.
pub fn parse_mknap(bytes: &[u8]) -> Result<Vec<MkpInstance>, ParseError> {
    let mut t = Tokens::new(bytes)?;
    let k: usize = t.next(|| "instance count".into())?;
    let mut out = Vec::with_capacity(k.min(1024));
    for inst in 1..=k {
        let n: usize = t.next(|| format!("instance {inst}: n"))?;
        let m: usize = t.next(|| format!("instance {inst}: m"))?;
        let opt = t.next_integral(|| format!("instance {inst}: optimum"))?;
        let mut profits = Vec::with_capacity(n);
        for j in 1..=n {
            profits.push(t.next(|| format!("instance {inst}: c[{j}]"))?);
        }
        let mut weights = Vec::with_capacity(m);
        for i in 1..=m {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n {
                row.push(t.next(|| format!("instance {inst}: A[{i}][{j}]"))?);
            }
            weights.push(row);
        }
        let mut capacities = Vec::with_capacity(m);
        for i in 1..=m {
            capacities.push(t.next(|| format!("instance {inst}: b[{i}]"))?);
        }
        out.push(MkpInstance {
            name: inst.to_string(),
            n,
            m,
            profits,
            weights,
            capacities,
            known_optimum: (opt != 0).then_some(opt),
            assignment: Vec::new(),
        });
    }
    t.finish()?;
    Ok(out)
}

/// `K`, then per instance `m n`, costs `m × n`, resources `m × n`,
/// capacities `m`. Variable `x_{ij}` (agent `i`, job `j`) has index
/// `i·n + j`. Costs are maximized.
pub fn parse_gap(bytes: &[u8]) -> Result<Vec<MkpInstance>, ParseError> {
    let mut t = Tokens::new(bytes)?;
    let k: usize = t.next(|| "instance count".into())?;
    let mut out = Vec::with_capacity(k.min(1024));
    for inst in 1..=k {
        let agents: usize = t.next(|| format!("instance {inst}: m"))?;
        let jobs: usize = t.next(|| format!("instance {inst}: n"))?;
        let nv = agents * jobs;
        let mut profits = Vec::with_capacity(nv);
        for i in 1..=agents {
            for j in 1..=jobs {
                profits.push(t.next(|| format!("instance {inst}: cost[{i}][{j}]"))?);
            }
        }
        let mut weights = Vec::with_capacity(agents);
        for i in 0..agents {
            let mut row = vec![0u64; nv];
            for j in 0..jobs {
                row[i * jobs + j] = t.next(|| format!("instance {inst}: resource[{}][{}]", i + 1, j + 1))?;
            }
            weights.push(row);
        }
        let mut capacities = Vec::with_capacity(agents);
        for i in 1..=agents {
            capacities.push(t.next(|| format!("instance {inst}: capacity[{i}]"))?);
        }
        let assignment = (0..jobs).map(|j| (0..agents).map(|i| i * jobs + j).collect()).collect();
        out.push(MkpInstance {
            name: inst.to_string(),
            n: nv,
            m: agents,
            profits,
            weights,
            capacities,
            known_optimum: None,
            assignment,
        });
    }
    t.finish()?;
    Ok(out)
}

/// One optimum per instance, in file order; `-` or `?` marks unknown.
pub fn parse_optima(bytes: &[u8]) -> Result<Vec<Option<i64>>, ParseError> {
    let mut t = Tokens::new(bytes)?;
    let mut out = Vec::new();
    while t.pos < t.toks.len() {
        if matches!(t.toks[t.pos], "-" | "?") {
            t.pos += 1;
            out.push(None);
        } else {
            let i = out.len() + 1;
            out.push(Some(t.next_integral(|| format!("optimum {i}"))?));
        }
    }
    Ok(out)
}
