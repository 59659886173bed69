//! JSON file formats shared by the CLI and the experiment harness.
//!
//! Field elements are written in the element text form `p,e,m:<digits>`;
//! the header is optional on input. Polynomials are arrays of elements,
//! coefficient of `X^{q^i}` at position `i`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, Codeword};
use crate::crt::ModulusFamily;
use crate::error::Result;
use crate::gf::{FieldContext, FieldElement};
use crate::linpoly::LinPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextHeader {
    pub p: u64,
    pub e: usize,
    pub m: usize,
    #[serde(default = "default_l")]
    pub l: usize,
    /// Defining polynomial over GF(p), little-endian; default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

fn default_l() -> usize {
    1
}

impl ContextHeader {
    pub fn of(ctx: &FieldContext) -> Self {
        Self {
            p: ctx.p(),
            e: ctx.e(),
            m: ctx.m(),
            l: ctx.l(),
            modulus: Some(ctx.modulus().to_vec()),
        }
    }

    pub fn build(&self) -> Result<Arc<FieldContext>> {
        match &self.modulus {
            Some(f) => FieldContext::with_modulus(self.p, self.e, self.m, self.l, f.clone()),
            None => FieldContext::new(self.p, self.e, self.m, self.l),
        }
    }
}

pub fn elements_to_strings(ctx: &FieldContext, xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(|x| ctx.format(x)).collect()
}

pub fn elements_from_strings(ctx: &FieldContext, xs: &[String]) -> Result<Vec<FieldElement>> {
    xs.iter().map(|s| ctx.parse(s)).collect()
}

pub fn poly_to_strings(p: &LinPoly) -> Vec<String> {
    elements_to_strings(p.context(), p.coeffs())
}

pub fn poly_from_strings(ctx: &Arc<FieldContext>, xs: &[String]) -> Result<LinPoly> {
    Ok(LinPoly::new(ctx, elements_from_strings(ctx, xs)?))
}

/// Modulus family; cofactors are recomputed and verified on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub context: ContextHeader,
    pub moduli: Vec<Vec<String>>,
}

impl FamilyFile {
    pub fn of(fam: &ModulusFamily) -> Self {
        Self {
            context: ContextHeader::of(fam.context()),
            moduli: fam.moduli().iter().map(poly_to_strings).collect(),
        }
    }

    pub fn load(&self) -> Result<ModulusFamily> {
        let ctx = self.context.build()?;
        let moduli = self
            .moduli
            .iter()
            .map(|f| poly_from_strings(&ctx, f))
            .collect::<Result<Vec<_>>>()?;
        ModulusFamily::new(moduli)
    }
}

/// A code as `{context, moduli, k, a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub context: ContextHeader,
    pub moduli: Vec<Vec<String>>,
    pub k: usize,
    pub a: Vec<String>,
}

impl SpecFile {
    pub fn of(spec: &CodeSpec) -> Self {
        let fam = FamilyFile::of(spec.family());
        Self {
            context: fam.context,
            moduli: fam.moduli,
            k: spec.k(),
            a: poly_to_strings(spec.a()),
        }
    }

    pub fn load(&self) -> Result<CodeSpec> {
        let fam = FamilyFile {
            context: self.context.clone(),
            moduli: self.moduli.clone(),
        }
        .load()?;
        let a = poly_from_strings(fam.context(), &self.a)?;
        CodeSpec::new(Arc::new(fam), self.k, a)
    }
}

/// A flat word of `n` symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordFile {
    pub symbols: Vec<String>,
}

impl WordFile {
    pub fn of(ctx: &FieldContext, w: &Codeword) -> Self {
        Self {
            symbols: elements_to_strings(ctx, w.symbols()),
        }
    }

    pub fn load(&self, ctx: &FieldContext) -> Result<Codeword> {
        Ok(Codeword::from_flat(elements_from_strings(ctx, &self.symbols)?))
    }
}

/// A linearized polynomial, e.g. a message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub coeffs: Vec<String>,
}

impl PolyFile {
    pub fn of(p: &LinPoly) -> Self {
        Self {
            coeffs: poly_to_strings(p),
        }
    }

    pub fn load(&self, ctx: &Arc<FieldContext>) -> Result<LinPoly> {
        poly_from_strings(ctx, &self.coeffs)
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crt::ModulusFamily;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_roundtrip() {
        let ctx = FieldContext::new(3, 1, 4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fam = loop {
            let moduli = (0..2).map(|_| LinPoly::random_monic(&ctx, 3, &mut rng)).collect();
            if let Ok(f) = ModulusFamily::new(moduli) {
                break f;
            }
        };
        let spec = CodeSpec::new(Arc::new(fam), 2, LinPoly::random_monic(&ctx, 1, &mut rng)).unwrap();
        let file = SpecFile::of(&spec);
        let json = serde_json::to_string(&file).unwrap();
        let back: SpecFile = serde_json::from_str(&json).unwrap();
        let spec2 = back.load().unwrap();
        assert_eq!(spec2.a(), spec.a());
        assert_eq!(spec2.family().moduli(), spec.family().moduli());
        let p = LinPoly::random(&ctx, 2, &mut rng);
        let w = spec.encode(&p).unwrap();
        assert_eq!(WordFile::of(&ctx, &w).load(&ctx).unwrap(), w);
        assert_eq!(PolyFile::of(&p).load(&ctx).unwrap(), p);
    }

    #[test]
    fn header_defaults() {
        let h: ContextHeader = serde_json::from_str(r#"{"p":2,"e":1,"m":5}"#).unwrap();
        assert_eq!(h.l, 1);
        let ctx = h.build().unwrap();
        assert_eq!(ContextHeader::of(&ctx).modulus.unwrap(), vec![1, 0, 1, 0, 0, 1]);
    }
}
