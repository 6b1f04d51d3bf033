//! Plain-text dictionary container with exact round trip.
//!
//! ```text
//! ddchan-dictionary 1
//! kind family
//! provenance det-optimized
//! j 8
//! d 16
//! n_r 640
//! j0 0
//! j1 0
//! assignment 0 0 ...
//! trace 0 12.5 12.1 ...
//! matrix 0
//! <re> <im>            (J*J lines, row-major)
//! ```
//!
//! A combined basis uses `kind combined`, `d 0`, and one `function <i>`
//! section of N_r values per explicit function. Numbers use the shortest
//! representation that parses back to the same `f64`.

use std::fmt::Write as _;

use super::combined::CombinedBasis;
use super::dft::{BasisFamily, Provenance};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::C64;

const MAGIC: &str = "ddchan-dictionary 1";

#[derive(Debug, Clone, PartialEq)]
pub enum Dictionary {
    Family { basis: BasisFamily, n_r: usize },
    Combined(CombinedBasis),
}

fn push_value(out: &mut String, v: C64) {
    let _ = writeln!(out, "{} {}", v.re, v.im);
}

impl Dictionary {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        match self {
            Dictionary::Family { basis, n_r } => {
                let _ = writeln!(out, "kind family");
                let _ = writeln!(out, "provenance {}", basis.provenance.as_str());
                let _ = writeln!(out, "j {}", basis.j());
                let _ = writeln!(out, "d {}", basis.d());
                let _ = writeln!(out, "n_r {n_r}");
                let _ = writeln!(out, "j0 0");
                let _ = writeln!(out, "j1 0");
                let assignment: Vec<String> = basis.assignment().iter().map(|a| a.to_string()).collect();
                let _ = writeln!(out, "assignment {}", assignment.join(" "));
                for (t, trace) in basis.cost_trace.iter().enumerate() {
                    let vals: Vec<String> = trace.iter().map(|v| v.to_string()).collect();
                    if vals.is_empty() {
                        let _ = writeln!(out, "trace {t}");
                    } else {
                        let _ = writeln!(out, "trace {t} {}", vals.join(" "));
                    }
                }
                for (idx, mat) in basis.distinct_matrices().iter().enumerate() {
                    let _ = writeln!(out, "matrix {idx}");
                    for r in 0..mat.nrows() {
                        for c in 0..mat.ncols() {
                            push_value(&mut out, mat[(r, c)]);
                        }
                    }
                }
            }
            Dictionary::Combined(cb) => {
                let _ = writeln!(out, "kind combined");
                let _ = writeln!(out, "provenance combined");
                let _ = writeln!(out, "j {}", cb.j());
                let _ = writeln!(out, "d 0");
                let _ = writeln!(out, "n_r {}", cb.n_r());
                let _ = writeln!(out, "j0 {}", cb.j0());
                let _ = writeln!(out, "j1 {}", cb.j1());
                for (i, f) in cb.functions().iter().enumerate() {
                    let _ = writeln!(out, "function {i}");
                    for v in f {
                        push_value(&mut out, *v);
                    }
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rd = Reader {
            lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
            pos: 0,
        };
        let (ln, first) = rd.next("header")?;
        if first != MAGIC {
            return Err(Error::Parse {
                line: ln,
                msg: "missing dictionary header".into(),
            });
        }
        let (_, kind) = rd.field("kind")?;
        let (pl, prov) = rd.field("provenance")?;
        let j = rd.usize_field("j")?;
        let d = rd.usize_field("d")?;
        let n_r = rd.usize_field("n_r")?;
        let j0 = rd.usize_field("j0")?;
        let j1 = rd.usize_field("j1")?;

        match kind.as_str() {
            "family" => {
                let provenance = Provenance::parse(&prov).ok_or_else(|| Error::Parse {
                    line: pl,
                    msg: format!("unknown provenance `{prov}`"),
                })?;
                let (al, a) = rd.field("assignment")?;
                let assignment = a
                    .split(' ')
                    .map(|s| parse_usize(al, s))
                    .collect::<Result<Vec<usize>>>()?;
                if assignment.len() != d {
                    return Err(Error::Parse {
                        line: al,
                        msg: format!("assignment has {} entries, expected {d}", assignment.len()),
                    });
                }
                let distinct = assignment.iter().max().map(|m| m + 1).unwrap_or(0);
                let mut traces = Vec::with_capacity(distinct);
                for t in 0..distinct {
                    let (tl, rest) = rd.field("trace")?;
                    let mut it = rest.split(' ');
                    if it.next().map(|s| parse_usize(tl, s)).transpose()? != Some(t) {
                        return Err(Error::Parse {
                            line: tl,
                            msg: format!("expected trace {t}"),
                        });
                    }
                    let vals = it
                        .map(|s| {
                            s.parse::<f64>().map_err(|_| Error::Parse {
                                line: tl,
                                msg: format!("bad number `{s}`"),
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    traces.push(vals);
                }
                let mut matrices = Vec::with_capacity(distinct);
                for t in 0..distinct {
                    let (ml, idx) = rd.field("matrix")?;
                    if parse_usize(ml, &idx)? != t {
                        return Err(Error::Parse {
                            line: ml,
                            msg: format!("expected matrix {t}"),
                        });
                    }
                    let vals = rd.values(j * j)?;
                    matrices.push(CMatrix::from_row_slice(j, j, &vals));
                }
                let basis = BasisFamily::new(provenance, matrices, assignment, traces)?;
                Ok(Dictionary::Family { basis, n_r })
            }
            "combined" => {
                let mut functions = Vec::with_capacity(j);
                for i in 0..j {
                    let (fl, idx) = rd.field("function")?;
                    if parse_usize(fl, &idx)? != i {
                        return Err(Error::Parse {
                            line: fl,
                            msg: format!("expected function {i}"),
                        });
                    }
                    functions.push(rd.values(n_r)?);
                }
                Ok(Dictionary::Combined(CombinedBasis::from_functions(n_r, j0, j1, functions)?))
            }
            other => Err(Error::Parse {
                line: 2,
                msg: format!("unknown dictionary kind `{other}`"),
            }),
        }
    }
}

fn parse_usize(ln: usize, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse {
        line: ln,
        msg: format!("bad integer `{s}`"),
    })
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self.lines.get(self.pos).copied().ok_or_else(|| Error::Parse {
            line: self.lines.len() + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn field(&mut self, key: &str) -> Result<(usize, String)> {
        let (ln, l) = self.next(key)?;
        let rest = if l == key {
            ""
        } else {
            l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| Error::Parse {
                line: ln,
                msg: format!("expected `{key} ...`"),
            })?
        };
        Ok((ln, rest.to_string()))
    }

    fn usize_field(&mut self, key: &str) -> Result<usize> {
        let (ln, v) = self.field(key)?;
        parse_usize(ln, &v)
    }

    fn values(&mut self, count: usize) -> Result<Vec<C64>> {
        let mut vals = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, l) = self.next("value")?;
            let mut it = l.split(' ');
            let re = it.next().and_then(|s| s.parse::<f64>().ok());
            let im = it.next().and_then(|s| s.parse::<f64>().ok());
            match (re, im, it.next()) {
                (Some(re), Some(im), None) => vals.push(C64::new(re, im)),
                _ => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("bad complex value `{l}`"),
                    })
                }
            }
        }
        Ok(vals)
    }
}
