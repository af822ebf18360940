use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use std::fmt::{Debug, Display};

/// Real scalar the numerical layers are generic over.
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

pub type C<T> = Complex<T>;

/// exp(2πi·num/modulus), exact for the quarter turns.
pub fn root_of_unity<T: Real>(num: u64, modulus: u64) -> C<T> {
    let num = num % modulus;
    if (4 * num).is_multiple_of(modulus) {
        return match 4 * num / modulus {
            0 => C::new(T::one(), T::zero()),
            1 => C::new(T::zero(), T::one()),
            2 => C::new(-T::one(), T::zero()),
            _ => C::new(T::zero(), -T::one()),
        };
    }
    let angle = T::TAU() * T::of(num as f64) / T::of(modulus as f64);
    C::new(angle.cos(), angle.sin())
}

/// All powers of exp(2πi/modulus).
pub fn roots_table<T: Real>(modulus: u64) -> Vec<C<T>> {
    (0..modulus).map(|k| root_of_unity(k, modulus)).collect()
}

pub fn cmax_abs<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm())
        .fold(T::zero(), T::max)
}
