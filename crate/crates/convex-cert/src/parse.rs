//! Parser for the function-spec mini-grammar used on the command line:
//!
//! ```text
//! SPEC := NAME
//!       | NAME '(' REAL { ',' REAL } ')'
//!       | 'scale' '(' REAL ',' SPEC ')'
//!       | 'sum' '(' SPEC ',' SPEC ')'
//!       | 'compose' '(' NAME1D ',' SPEC ')'
//! ```
//!
//! Whitespace-insensitive. The target dimension comes from the caller and
//! is validated against the spec; errors carry byte positions.

use crate::error::{Error, Result};
use crate::funcs::{catalog, compose_mono, fn_sum, scale, FunctionHandle};
use crate::vecspace::Vector;

pub fn parse_fn_spec(text: &str, dim: usize) -> Result<FunctionHandle> {
    if dim == 0 {
        return Err(Error::Config("--dim must be at least 1".into()));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.parse_spec(dim)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn parse_ident(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a function name"));
        }
        Ok((
            start,
            std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii")
                .to_string(),
        ))
    }

    fn parse_number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E')
        {
            self.pos += 1;
        }
        let tok = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        tok.parse::<f64>().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("expected a number, got `{tok}`"),
        })
    }

    fn parse_args(&mut self) -> Result<Vec<f64>> {
        self.expect(b'(')?;
        let mut args = vec![self.parse_number()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            args.push(self.parse_number()?);
        }
        self.expect(b')')?;
        Ok(args)
    }

    fn parse_spec(&mut self, dim: usize) -> Result<FunctionHandle> {
        let (name_pos, name) = self.parse_ident()?;
        match name.as_str() {
            "scale" => {
                self.expect(b'(')?;
                let a = self.parse_number()?;
                self.expect(b',')?;
                let inner = self.parse_spec(dim)?;
                self.expect(b')')?;
                scale(a, &inner).map_err(|e| Error::Parse {
                    pos: name_pos,
                    msg: e.to_string(),
                })
            }
            "sum" => {
                self.expect(b'(')?;
                let f = self.parse_spec(dim)?;
                self.expect(b',')?;
                let g = self.parse_spec(dim)?;
                self.expect(b')')?;
                fn_sum(&f, &g).map_err(|e| Error::Parse {
                    pos: name_pos,
                    msg: e.to_string(),
                })
            }
            "compose" => {
                self.expect(b'(')?;
                let (h_pos, h_name) = self.parse_ident()?;
                let h = match h_name.as_str() {
                    // Only outer functions known to be convex and monotone
                    // increasing on their domain are admissible.
                    "square_pos" => catalog::square_pos(),
                    other => {
                        return Err(Error::Parse {
                            pos: h_pos,
                            msg: format!(
                                "`{other}` is not an admissible outer function for compose (try square_pos)"
                            ),
                        })
                    }
                };
                self.expect(b',')?;
                let f = self.parse_spec(dim)?;
                self.expect(b')')?;
                compose_mono(&h, &f).map_err(|e| Error::Parse {
                    pos: name_pos,
                    msg: e.to_string(),
                })
            }
            "square" | "square_pos" | "quartic" => {
                if dim != 1 {
                    return Err(Error::Parse {
                        pos: name_pos,
                        msg: format!("`{name}` is univariate but --dim is {dim}"),
                    });
                }
                Ok(match name.as_str() {
                    "square" => catalog::square(),
                    "square_pos" => catalog::square_pos(),
                    _ => catalog::quartic1d(),
                })
            }
            "norm" => Ok(catalog::eu_norm_fn(dim)),
            "norm2" => Ok(catalog::norm_sq_fn(dim)),
            "neg_norm2" => Ok(catalog::neg_norm_sq(dim)),
            "const" => {
                if self.peek() == Some(b'(') {
                    let args = self.parse_args()?;
                    if args.len() != 1 {
                        return Err(Error::Parse {
                            pos: name_pos,
                            msg: format!("const takes one argument, got {}", args.len()),
                        });
                    }
                    Ok(catalog::const_c(dim, args[0]))
                } else {
                    Ok(catalog::const_default(dim))
                }
            }
            "affine" => {
                let args = self.parse_args()?;
                if args.len() != dim + 1 {
                    return Err(Error::Parse {
                        pos: name_pos,
                        msg: format!(
                            "affine takes dim+1 = {} arguments (g1..gn, b), got {}",
                            dim + 1,
                            args.len()
                        ),
                    });
                }
                let g = Vector::new(args[..dim].to_vec()).map_err(|e| Error::Parse {
                    pos: name_pos,
                    msg: e.to_string(),
                })?;
                Ok(catalog::affine(g, args[dim]))
            }
            "diagq" => {
                let args = self.parse_args()?;
                if args.len() != dim {
                    return Err(Error::Parse {
                        pos: name_pos,
                        msg: format!("diagq takes {dim} coefficients (one per coordinate), got {}", args.len()),
                    });
                }
                catalog::diag_quadratic(args).map_err(|e| Error::Parse {
                    pos: name_pos,
                    msg: e.to_string(),
                })
            }
            other => Err(Error::Parse {
                pos: name_pos,
                msg: format!(
                    "unknown function `{other}` (known: square, square_pos, quartic, norm, norm2, neg_norm2, const, affine, diagq, scale, sum, compose)"
                ),
            }),
        }
    }
}
