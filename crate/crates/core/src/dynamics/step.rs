use crate::model::Role;

/// Regular endpoints changed by one tick: at most two (regular slot is the
/// caller's business; these are global agent indices with their new values).
#[derive(Debug, Clone, Copy, Default)]
pub struct Touched {
    len: u8,
    items: [(usize, f64); 2],
}

impl Touched {
    #[inline]
    fn push(&mut self, agent: usize, value: f64) {
        self.items[self.len as usize] = (agent, value);
        self.len += 1;
    }

    #[inline]
    pub fn as_slice(&self) -> &[(usize, f64)] {
        &self.items[..self.len as usize]
    }
}

/// One pairwise-averaging update on the full state vector.
///
/// Each regular endpoint k of the selected edge {i, j} moves to the
/// q-weighted average q·X_k + (1−q)·X_other of the two pre-update endpoint
/// states; stubborn endpoints and non-endpoints are unchanged. Total
/// function: any distinct endpoints are accepted.
#[inline]
pub fn gossip_step(x: &mut [f64], i: usize, j: usize, q: f64, roles: &[Role]) -> Touched {
    debug_assert_ne!(i, j, "self-loops cannot fire");
    let xi = x[i];
    let xj = x[j];
    let mut touched = Touched::default();
    if roles[i] == Role::Regular {
        let v = q * xi + (1.0 - q) * xj;
        x[i] = v;
        touched.push(i, v);
    }
    if roles[j] == Role::Regular {
        let v = q * xj + (1.0 - q) * xi;
        x[j] = v;
        touched.push(j, v);
    }
    touched
}
