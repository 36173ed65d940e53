//! SDPA sparse format (`.dat-s`) for a single-block problem
//! `min c^T x  s.t.  sum x_i F_i - F_0 ⪰ 0`.

use std::fmt::Write as _;

use crate::error::{QmcError, Result};
use crate::npo_sdp::solver::{SdpProblem, SparseSym};

/// SDPA data: `F_0` and `F_1..F_m` on one block, objective `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaData {
    pub block_size: usize,
    pub c: Vec<f64>,
    /// `f[0] = F_0`.
    pub f: Vec<SparseSym>,
}

impl SdpaData {
    /// `max b^T y  s.t.  C - sum y_i A_i ⪰ 0`  ⇔  `min (-b)^T y  s.t.  sum y_i (-A_i) - (-C) ⪰ 0`.
    pub fn from_problem(p: &SdpProblem) -> Self {
        let neg = |s: &SparseSym| SparseSym { entries: s.entries.iter().map(|&(i, j, v)| (i, j, -v)).collect() };
        let mut f = vec![neg(&p.c)];
        f.extend(p.a.iter().map(neg));
        SdpaData { block_size: p.dim, c: p.b.iter().map(|v| -v).collect(), f }
    }

    pub fn to_problem(&self) -> SdpProblem {
        let neg = |s: &SparseSym| SparseSym { entries: s.entries.iter().map(|&(i, j, v)| (i, j, -v)).collect() };
        SdpProblem {
            dim: self.block_size,
            c: neg(&self.f[0]),
            a: self.f[1..].iter().map(neg).collect(),
            b: self.c.iter().map(|v| -v).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.c.len());
        let _ = writeln!(s, "1");
        let _ = writeln!(s, "{}", self.block_size);
        let obj: Vec<String> = self.c.iter().map(|v| fmt_num(*v)).collect();
        let _ = writeln!(s, "{}", obj.join(" "));
        for (k, mat) in self.f.iter().enumerate() {
            let mut entries = mat.entries.clone();
            entries.sort_by_key(|a| (a.0, a.1));
            for (i, j, v) in entries {
                if v != 0.0 {
                    let _ = writeln!(s, "{} 1 {} {} {}", k, i + 1, j + 1, fmt_num(v));
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| QmcError::InvalidArgument(format!("sdpa: {msg}"));
        let mut lines =
            text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
        let first_tok = |l: Option<&str>| -> Result<usize> {
            l.and_then(|l| l.split(|c: char| c.is_whitespace() || c == ',').find(|t| !t.is_empty()))
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("bad header"))
        };
        let m = first_tok(lines.next())?;
        let nblock = first_tok(lines.next())?;
        if nblock != 1 {
            return Err(bad("only single-block problems are supported"));
        }
        // diagonal (negative) blocks are not supported and fail to parse here
        let block_size = first_tok(lines.next())?;
        let nums = |l: &str| -> Vec<String> {
            l.split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '(' | ')'))
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        };
        let mut c = Vec::with_capacity(m);
        while c.len() < m {
            let l = lines.next().ok_or_else(|| bad("objective vector truncated"))?;
            for t in nums(l) {
                c.push(t.parse::<f64>().map_err(|_| bad("bad objective entry"))?);
            }
        }
        if c.len() != m {
            return Err(bad("objective vector length mismatch"));
        }
        let mut f = vec![SparseSym::default(); m + 1];
        for l in lines {
            let t = nums(l);
            if t.len() != 5 {
                return Err(bad(&format!("bad entry line {l:?}")));
            }
            let k: usize = t[0].parse().map_err(|_| bad("bad matrix number"))?;
            let blk: usize = t[1].parse().map_err(|_| bad("bad block number"))?;
            let i: usize = t[2].parse().map_err(|_| bad("bad row"))?;
            let j: usize = t[3].parse().map_err(|_| bad("bad column"))?;
            let v: f64 = t[4].parse().map_err(|_| bad("bad value"))?;
            if k > m || blk != 1 || i == 0 || j == 0 || i > block_size || j > block_size {
                return Err(bad(&format!("entry out of range {l:?}")));
            }
            let (a, b) = if i <= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
            f[k].entries.push((a, b, v));
        }
        Ok(SdpaData { block_size, c, f })
    }
}

fn fmt_num(v: f64) -> String {
    // shortest round-trip representation
    if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = SdpProblem {
            dim: 2,
            c: SparseSym { entries: vec![(0, 0, 1.0), (1, 1, 1.0)] },
            a: vec![SparseSym { entries: vec![(0, 1, -0.5)] }, SparseSym { entries: vec![(1, 1, 2.25)] }],
            b: vec![-2.0, 0.125],
        };
        let d = SdpaData::from_problem(&p);
        let text = d.to_text();
        assert!(text.starts_with("2\n1\n2\n2 -0.125\n"));
        let back = SdpaData::parse(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_problem().b, p.b);
    }

    #[test]
    fn empty_constraints_have_valid_header() {
        let p = SdpProblem { dim: 3, c: SparseSym { entries: vec![(0, 0, 1.0)] }, a: vec![], b: vec![] };
        let text = SdpaData::from_problem(&p).to_text();
        assert_eq!(text, "0\n1\n3\n\n0 1 1 1 -1\n");
        assert_eq!(SdpaData::parse(&text).unwrap().block_size, 3);
    }

    #[test]
    fn parse_errors() {
        assert!(SdpaData::parse("1\n2\n3 3\n1 1\n").is_err());
        assert!(SdpaData::parse("1\n1\n2\n1\n1 1 3 1 1\n").is_err());
    }
}
