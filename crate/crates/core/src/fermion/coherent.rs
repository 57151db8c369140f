use std::sync::Arc;

use num_traits::One;

use super::FermionState;
use crate::error::{Error, Result};
use crate::grassmann::relations::{Exact, RelationCheck};
use crate::grassmann::{FermionModes, GeneratorSet, GrassmannElement, SuperOperator};
use crate::scalar::Coefficient;

type Elem<C> = GrassmannElement<C>;
type Op<C> = SuperOperator<C>;

fn ladder<C: Coefficient>(modes: FermionModes, gens: &Arc<GeneratorSet>, mode: usize) -> (Op<C>, Op<C>) {
    let c = Op::annihilation(modes, gens, mode);
    let cd = c.super_dagger();
    (c, cd)
}

fn exp_order(gens: &GeneratorSet) -> usize {
    2 * gens.len() + 2
}

/// `c† ζ − ζ* c` for the annihilator `c` of `mode` and an odd element `ζ`.
pub fn displacement_generator<C: Coefficient>(modes: FermionModes, mode: usize, zeta: &Elem<C>) -> Result<Op<C>> {
    if !zeta.is_odd() {
        return Err(Error::NotOdd);
    }
    let gens = zeta.generators();
    let (c, cd) = ladder(modes, gens, mode);
    let z = Op::grassmann(modes, zeta);
    let zc = Op::grassmann(modes, &zeta.g_conjugate());
    cd.super_mul(&z)?.try_sub(&zc.super_mul(&c)?)
}

/// `D(ζ) = exp(c† ζ − ζ* c)`, summed exactly (the series terminates).
pub fn fermion_displacement<C: Coefficient>(modes: FermionModes, mode: usize, zeta: &Elem<C>) -> Result<Op<C>> {
    displacement_generator(modes, mode, zeta)?.super_exp_nilpotent(exp_order(zeta.generators()))
}

/// `|ζ⟩ = D(ζ)|0⟩` on one mode.
pub fn coherent_state<C: Coefficient>(zeta: &Elem<C>) -> Result<FermionState<C>> {
    let vacuum = FermionState::basis(FermionModes::One, zeta.generators(), 0);
    vacuum.apply(&fermion_displacement(FermionModes::One, 0, zeta)?)
}

/// `e^{−ζ*ζ/2} Σ_n (−ζ)^n |n⟩`, coefficients written before the kets.
pub fn coherent_state_from_expansion<C: Coefficient>(zeta: &Elem<C>) -> Result<FermionState<C>> {
    let damping = half_norm(zeta)?.scale(&-C::one()).exp_nilpotent()?;
    let first = damping.g_mul(&-zeta)?;
    FermionState::from_coefficient_first(FermionModes::One, vec![damping, first])
}

fn half_norm<C: Coefficient>(zeta: &Elem<C>) -> Result<Elem<C>> {
    Ok(zeta.g_conjugate().g_mul(zeta)?.scale(&(C::one() / C::integer(2))))
}

/// `exp(x* y − x* x/2 − y* y/2)`.
pub fn overlap_formula<C: Coefficient>(x: &Elem<C>, y: &Elem<C>) -> Result<Elem<C>> {
    let cross = x.g_conjugate().g_mul(y)?;
    cross.try_sub(&half_norm(x)?)?.try_sub(&half_norm(y)?)?.exp_nilpotent()
}

/// `ρ_ζ = |−ζ⟩⟨ζ|`.
pub fn rho_alpha<C: Coefficient>(zeta: &Elem<C>) -> Result<Op<C>> {
    coherent_state(&-zeta)?.outer(&coherent_state(zeta)?)
}

/// `[[1 − ζ*ζ, ζ*], [−ζ, ζ*ζ]]`, the matrix elements `⟨m|ρ_ζ|n⟩`.
pub fn rho_alpha_matrix<C: Coefficient>(zeta: &Elem<C>) -> Result<Vec<Vec<Elem<C>>>> {
    let gens = zeta.generators();
    let norm = zeta.g_conjugate().g_mul(zeta)?;
    Ok(vec![vec![Elem::one(gens).try_sub(&norm)?, zeta.g_conjugate()], vec![-zeta, norm]])
}

fn check_occupation(n: usize) -> Result<()> {
    if n > 1 {
        return Err(Error::InvalidParameter { name: "n", value: n as f64, reason: "fermion occupation is 0 or 1" });
    }
    Ok(())
}

/// `D(ζ)|n⟩`.
pub fn displaced_number_state<C: Coefficient>(zeta: &Elem<C>, n: usize) -> Result<FermionState<C>> {
    check_occupation(n)?;
    FermionState::basis(FermionModes::One, zeta.generators(), n).apply(&fermion_displacement(
        FermionModes::One,
        0,
        zeta,
    )?)
}

/// `(a† − ζ*)^n |ζ⟩`.
pub fn displaced_number_state_from_ladder<C: Coefficient>(zeta: &Elem<C>, n: usize) -> Result<FermionState<C>> {
    check_occupation(n)?;
    let state = coherent_state(zeta)?;
    if n == 0 {
        return Ok(state);
    }
    let (_, ad) = ladder(FermionModes::One, zeta.generators(), 0);
    state.apply(&ad.try_sub(&Op::grassmann(FermionModes::One, &zeta.g_conjugate()))?)
}

fn op_diff<C: Coefficient>(x: &Op<C>, y: &Op<C>) -> Result<f64> {
    x.max_abs_diff(y)
}

fn elem_diff<C: Coefficient>(x: &Elem<C>, y: &Elem<C>) -> Result<f64> {
    x.max_abs_diff(y)
}

fn sandwich_diff<C: Coefficient>(x: &[Vec<Elem<C>>], y: &[Vec<Elem<C>>]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (rx, ry) in x.iter().zip(y) {
        for (a, b) in rx.iter().zip(ry) {
            worst = worst.max(elem_diff(a, b)?);
        }
    }
    Ok(worst)
}

fn check(name: &str, residual: f64) -> RelationCheck {
    RelationCheck { name: name.into(), residual }
}

/// Identities of the single-mode coherent-state calculus, evaluated in
/// exact rational arithmetic. Every residual must be exactly zero.
pub fn fermion_identity_suite() -> Result<Vec<RelationCheck>> {
    let g = GeneratorSet::one_mode();
    let one_mode = FermionModes::One;
    let alpha = Elem::<Exact>::generator(&g, "α")?;
    let alpha_c = alpha.g_conjugate();
    let norm = alpha_c.g_mul(&alpha)?;
    let half = Exact::one() / Exact::integer(2);
    let (a, ad) = ladder::<Exact>(one_mode, &g, 0);
    let id = Op::identity(one_mode, &g);
    let d = fermion_displacement(one_mode, 0, &alpha)?;
    let d_dag = d.super_dagger();
    let mut out = Vec::new();

    let shifted = a.try_sub(&Op::grassmann(one_mode, &alpha))?;
    out.push(check("D a D† = a − α", op_diff(&d.super_mul(&a)?.super_mul(&d_dag)?, &shifted)?));
    let unitary = op_diff(&d_dag.super_mul(&d)?, &id)?.max(op_diff(&d.super_mul(&d_dag)?, &id)?);
    out.push(check("D† D = D D† = 1", unitary));
    let inverse = fermion_displacement(one_mode, 0, &-&alpha)?;
    out.push(check("D† = D(−α)", op_diff(&d_dag, &inverse)?));
    out.push(check("D(0) = 1", op_diff(&fermion_displacement(one_mode, 0, &Elem::zero(&g))?, &id)?));

    let x = displacement_generator(one_mode, 0, &alpha)?;
    let number = ad.super_mul(&a)?;
    let x_sq = Op::grassmann(one_mode, &norm).super_mul(&number.scale(&Exact::integer(2)).try_sub(&id)?)?;
    out.push(check("X² = α*α (2a†a − 1)", op_diff(&x.super_mul(&x)?, &x_sq)?));
    let cube = x.super_mul(&x)?.super_mul(&x)?;
    out.push(check("X³ = 0", op_diff(&cube, &Op::zero(one_mode, &g))?));

    let ket = coherent_state(&alpha)?;
    let damping = Elem::one(&g).try_sub(&norm.scale(&half))?;
    let expected = FermionState::from_coefficient_first(one_mode, vec![damping.clone(), -&alpha])?;
    out.push(check("D(α)|0⟩ = (1 − α*α/2)|0⟩ − α|1⟩", ket.max_abs_diff(&expected)?));
    out.push(check(
        "|α⟩ = e^{−α*α/2} Σ (−α)^n |n⟩, coefficients before kets",
        ket.max_abs_diff(&coherent_state_from_expansion(&alpha)?)?,
    ));
    let bra_number = [damping.clone(), damping.g_mul(&alpha)?];
    let amp =
        (0..2).try_fold(0.0_f64, |acc, n| Ok::<_, Error>(acc.max(elem_diff(&ket.amplitudes()[n], &bra_number[n])?)))?;
    out.push(check("⟨n|α⟩ = e^{−α*α/2} α^n", amp));
    let eigen = ket.apply(&a)?.max_abs_diff(&ket.apply(&Op::grassmann(one_mode, &alpha))?)?;
    out.push(check("a|α⟩ = α|α⟩", eigen));
    let dual = ket.bra().super_mul(&ad)?.try_sub(&ket.bra().super_mul(&Op::grassmann(one_mode, &alpha_c))?)?;
    out.push(check("⟨α|a† = ⟨α|α*", op_diff(&dual, &Op::zero(one_mode, &g))?));
    out.push(check("⟨α|α⟩ = 1", elem_diff(&ket.overlap(&ket)?, &Elem::one(&g))?));

    let g2 = GeneratorSet::two_mode();
    let (x1, y1) = (Elem::<Exact>::generator(&g2, "α")?, Elem::generator(&g2, "β")?);
    let overlap = coherent_state(&x1)?.overlap(&coherent_state(&y1)?)?;
    out.push(check("⟨α|β⟩ = exp(α*β − α*α/2 − β*β/2)", elem_diff(&overlap, &overlap_formula(&x1, &y1)?)?));

    let rho = rho_alpha(&alpha)?;
    out.push(check("ρ_α = [[1 − α*α, α*], [−α, α*α]]", sandwich_diff(&rho.sandwich(), &rho_alpha_matrix(&alpha)?)?));
    out.push(check("Tr ρ_α = 1", elem_diff(&rho.super_trace(), &Elem::one(&g))?));
    out.push(check("Tr(ρ_α a†a) = α*α", elem_diff(&rho.super_mul(&number)?.super_trace(), &norm)?));

    let minus = coherent_state(&-&alpha)?;
    let (mut sign_rule, mut diagonal) = (0.0_f64, 0.0_f64);
    for m in 0..2 {
        for n in 0..2 {
            let bra_n = ket.bra().matrix_element(0, n);
            let ket_m = ket.amplitudes()[m].clone();
            let product = bra_n.g_mul(&ket_m)?;
            let signed = if (m * (n + 1)) % 2 == 1 { -&product } else { product };
            sign_rule = sign_rule.max(elem_diff(&rho.matrix_element(m, n), &signed)?);
        }
        let lhs = minus.amplitudes()[m].g_mul(&ket.bra().matrix_element(0, m))?;
        let rhs = ket.bra().matrix_element(0, m).g_mul(&ket.amplitudes()[m])?;
        diagonal = diagonal.max(elem_diff(&lhs, &rhs)?);
    }
    out.push(check("⟨m|ρ_α|n⟩ = (−1)^{m(n+1)} ⟨α|n⟩⟨m|α⟩", sign_rule));
    out.push(check("⟨n|−α⟩⟨α|n⟩ = ⟨α|n⟩⟨n|α⟩", diagonal));

    let projector = ket.outer(&ket)?;
    out.push(check("∫dα* dα |α⟩⟨α| = 1", op_diff(&projector.integrate_measure(&["α*", "α"])?, &id)?));

    let displaced = (0..2).try_fold(0.0_f64, |acc, n| {
        Ok::<_, Error>(
            acc.max(displaced_number_state(&alpha, n)?.max_abs_diff(&displaced_number_state_from_ladder(&alpha, n)?)?),
        )
    })?;
    out.push(check("D(α)|n⟩ = (a† − α*)^n |α⟩, n = 0, 1", displaced));
    Ok(out)
}

/// Statements whose literal reading is recorded rather than asserted; each
/// residual is the distance from the literal statement.
pub fn convention_probes() -> Result<Vec<RelationCheck>> {
    let g = GeneratorSet::one_mode();
    let one_mode = FermionModes::One;
    let alpha = Elem::<Exact>::generator(&g, "α")?;
    let ket = coherent_state(&alpha)?;
    let rho = rho_alpha(&alpha)?;
    let d = fermion_displacement(one_mode, 0, &alpha)?;
    let mut out = Vec::new();

    out.push(check("ρ_α† = ρ_α", op_diff(&rho.super_dagger(), &rho)?));
    out.push(check("ρ_α† = ρ_{−α}", op_diff(&rho.super_dagger(), &rho_alpha(&-&alpha)?)?));
    let lhs = ket.bra().super_mul(&d.super_dagger())?;
    let rhs = ket.bra().super_mul(&Op::grassmann(one_mode, &alpha.g_conjugate()))?;
    out.push(check("⟨α|D†(α) = ⟨α|α*", op_diff(&lhs, &rhs)?));

    let damping = coherent_state_from_expansion(&alpha)?.amplitudes()[0].clone();
    let ket_first = FermionState::new(one_mode, vec![damping.clone(), damping.g_mul(&-&alpha)?])?;
    out.push(check("|α⟩ = e^{−α*α/2} Σ |n⟩ (−α)^n, coefficients after kets", ket.max_abs_diff(&ket_first)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_is_exact() {
        let checks = fermion_identity_suite().unwrap();
        for c in &checks {
            assert_eq!(c.residual, 0.0, "{}", c.name);
        }
        assert!(checks.len() >= 18);
    }

    #[test]
    fn convention_outcomes() {
        let probes = convention_probes().unwrap();
        let get = |name: &str| probes.iter().find(|c| c.name == name).unwrap().residual;
        assert!(get("ρ_α† = ρ_α") > 0.0);
        assert_eq!(get("ρ_α† = ρ_{−α}"), 0.0);
        assert!(get("⟨α|D†(α) = ⟨α|α*") > 0.0);
        assert!(get("|α⟩ = e^{−α*α/2} Σ |n⟩ (−α)^n, coefficients after kets") > 0.0);
    }

    #[test]
    fn displacement_needs_odd_argument() {
        let g = GeneratorSet::one_mode();
        let even = Elem::<Exact>::product_of(&g, &["α", "α*"]).unwrap();
        assert!(matches!(fermion_displacement(FermionModes::One, 0, &even), Err(Error::NotOdd)));
        assert!(matches!(displaced_number_state(&Elem::<Exact>::zero(&g), 2), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn rendered_density_matches_the_closed_form_matrix() {
        let g = GeneratorSet::one_mode();
        let alpha = Elem::<Exact>::generator(&g, "α").unwrap();
        let text = rho_alpha(&alpha).unwrap().render();
        assert_eq!(text, "[1 + α·α*, α*]\n[-α, -α·α*]");
    }

    #[test]
    fn float_coefficients_agree() {
        use num_complex::Complex64;
        let g = GeneratorSet::one_mode();
        let alpha = Elem::<Complex64>::generator(&g, "α").unwrap();
        let rho = rho_alpha(&alpha).unwrap();
        assert_eq!(rho.super_trace(), Elem::one(&g));
    }
}
