use std::collections::HashMap;

use super::elem::RingElem;
use super::spec::{GenKind, Monomial};
use super::{rat, ratio};

impl RingElem {
    /// Adams operation `Ψ^r`, the ring endomorphism with
    /// `ν ↦ 1 − (1−ν)^r`, `u ↦ u^r`, `N_m ↦ N_{|r|m}` and `t ↦ t^{|r|}`.
    /// Negative `r` acts through duals: `(1−ν)^r` is expanded by inversion,
    /// units go to `u^r`, Newton generators and `t` variables are self-dual.
    pub fn adams(&self, r: i64) -> RingElem {
        assert!(r != 0, "Adams operation needs r ≠ 0");
        if r == 1 {
            return self.clone();
        }
        let spec = self.spec().clone();
        let ar = r.unsigned_abs() as i32;
        let one = RingElem::one(&spec);
        // images of ν_i: 1 − (1−ν_i)^r
        let mut nil_images: Vec<RingElem> = Vec::new();
        for (name, _) in &spec.nilpotent {
            let nu = RingElem::gen(&spec, name).expect("generator exists");
            let p = &one - &nu;
            let pr = p.pow_i(r).expect("1 − ν is a unit");
            nil_images.push(&one - &pr);
        }
        let mut cache: HashMap<(usize, i32), RingElem> = HashMap::new();
        let mut out = RingElem::zero(&spec);
        for (m, c) in self.terms() {
            // the part of the monomial that maps to a monomial
            let mut mono = Monomial::zeros(spec.len());
            let mut coeff = RingElem::one(&spec);
            let mut dead = false;
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match spec.kind_at(idx) {
                    GenKind::Nilpotent => {
                        let img = cache
                            .entry((idx, e))
                            .or_insert_with(|| nil_images[idx].pow(e as u32));
                        coeff = &coeff * &*img;
                    }
                    GenKind::Unit => mono.0[idx] += e * r as i32,
                    GenKind::Newton => {
                        let m_index = idx - spec.newton_range().start + 1;
                        let target = m_index as u64 * ar as u64;
                        if target > spec.lambda.max_index as u64 {
                            dead = true;
                            break;
                        }
                        mono.0[spec.newton_range().start + target as usize - 1] += e;
                    }
                    GenKind::T => mono.0[idx] += e * ar,
                }
            }
            if dead || !spec.admits(&mono) {
                continue;
            }
            let term = RingElem::monomial(&spec, mono, c.clone());
            out += &(&term * &coeff);
        }
        out
    }

    /// Complete homogeneous symmetric power `h_k`, from the Newton
    /// recurrence `k·h_k = Σ_{r=1..k} Ψ^r(a)·h_{k−r}`.
    pub fn sym_power(&self, k: u32) -> RingElem {
        self.sym_powers(k).pop().expect("nonempty")
    }

    /// `[h_0, h_1, …, h_k]` of the element.
    pub fn sym_powers(&self, k: u32) -> Vec<RingElem> {
        let spec = self.spec();
        let mut h = vec![RingElem::one(spec)];
        if k == 0 {
            return h;
        }
        let psi: Vec<RingElem> = (1..=k as i64).map(|r| self.adams(r)).collect();
        for n in 1..=k as usize {
            let mut acc = RingElem::zero(spec);
            for r in 1..=n {
                acc += &(&psi[r - 1] * &h[n - r]);
            }
            h.push(acc.scale(&ratio(1, n as i64)));
        }
        h
    }

    /// `Σ_i (−1)^i ∧^i`, i.e. `h_i(−a)` with signs, for an element; equals
    /// `λ_{-1}` of a sum of line classes.
    pub fn lambda_minus_one(&self, k: u32) -> RingElem {
        let neg = self.scale(&rat(-1));
        let hs = neg.sym_powers(k);
        let mut acc = RingElem::zero(self.spec());
        for h in hs {
            acc += &h;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn adams_on_generators() {
        let s = RingSpec::builder()
            .nilpotent("nu", 3)
            .unit("u")
            .lambda(4, 4)
            .t_var("tp", 3)
            .build()
            .unwrap();
        let n1 = RingElem::gen(&s, "N1").unwrap();
        assert_eq!(n1.adams(2), RingElem::gen(&s, "N2").unwrap());
        assert!(RingElem::gen(&s, "N3").unwrap().adams(2).is_zero());
        let nu = RingElem::gen(&s, "nu").unwrap();
        let expected = &nu.scale_int(2) - &(&nu * &nu);
        assert_eq!(nu.adams(2), expected);
        let u = RingElem::gen(&s, "u").unwrap();
        assert_eq!(u.adams(-3), RingElem::gen_pow(&s, "u", -3).unwrap());
        let t = RingElem::gen(&s, "tp").unwrap();
        assert_eq!(t.adams(2), &t * &t);
        let x = &(&nu * &u) + &n1;
        assert_eq!(x.adams(1), x);
    }

    #[test]
    fn adams_negative_on_p() {
        let s = RingSpec::builder().nilpotent("nu", 3).build().unwrap();
        let one = RingElem::one(&s);
        let nu = RingElem::gen(&s, "nu").unwrap();
        let p = &one - &nu;
        assert_eq!(p.adams(-1), p.invert().unwrap());
    }

    #[test]
    fn sym_power_examples() {
        let s = RingSpec::builder().unit("u").lambda(2, 2).build().unwrap();
        let n1 = RingElem::gen(&s, "N1").unwrap();
        let n2 = RingElem::gen(&s, "N2").unwrap();
        assert_eq!(n1.sym_power(1), n1);
        assert_eq!(n1.sym_power(2), (&(&n1 * &n1) + &n2).scale(&ratio(1, 2)));
        let u = RingElem::gen(&s, "u").unwrap();
        assert_eq!(u.sym_power(2), &u * &u);
        assert!(u.sym_power(0).is_one());
    }

    #[test]
    fn lambda_minus_one_of_a_line() {
        let s = RingSpec::builder().unit("L").build().unwrap();
        let l = RingElem::gen(&s, "L").unwrap();
        let one = RingElem::one(&s);
        assert_eq!(l.lambda_minus_one(3), &one - &l);
    }
}
