use super::ModelError;

/// Whether an agent updates its state or holds it fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Regular,
    Stubborn,
}

/// Per-agent community label plus regular/stubborn role, with the
/// stubborn-to-regular witness map.
///
/// Labels are stored 0-based internally; user-facing output is 1-based.
/// Every community must contain at least one regular agent, and every
/// stubborn agent must name a regular witness in its own community (the
/// prior knowledge that makes stubborn labels recoverable at all).
#[derive(Debug, Clone)]
pub struct CommunityAssignment {
    labels: Vec<usize>,
    roles: Vec<Role>,
    /// witness[i] = Some(j) for stubborn i, with j regular and same-labeled.
    witness: Vec<Option<usize>>,
    num_communities: usize,
    /// Global indices of regular agents, in agent order. Positions in this
    /// vector are the "regular slots" used by state vectors and averages.
    regular: Vec<usize>,
    stubborn: Vec<usize>,
    /// Global index -> regular slot (None for stubborn agents).
    regular_slot: Vec<Option<usize>>,
    /// Global index -> stubborn slot (None for regular agents).
    stubborn_slot: Vec<Option<usize>>,
    community_sizes: Vec<usize>,
    regular_per_community: Vec<usize>,
    stubborn_per_community: Vec<usize>,
}

impl CommunityAssignment {
    /// Builds an assignment from explicit labels, roles, and witnesses.
    ///
    /// `witness[i]` must be `Some` exactly for stubborn agents, pointing at a
    /// regular agent with the same label.
    pub fn new(
        labels: Vec<usize>,
        roles: Vec<Role>,
        witness: Vec<Option<usize>>,
    ) -> Result<Self, ModelError> {
        let n = labels.len();
        if roles.len() != n {
            return Err(ModelError::LengthMismatch {
                what: "roles",
                got: roles.len(),
                expected: n,
            });
        }
        if witness.len() != n {
            return Err(ModelError::LengthMismatch {
                what: "stubborn_witness",
                got: witness.len(),
                expected: n,
            });
        }
        let num_communities = labels.iter().copied().max().map_or(0, |m| m + 1);
        if num_communities < 2 {
            return Err(ModelError::TooFewCommunities(num_communities));
        }

        let mut community_sizes = vec![0usize; num_communities];
        let mut regular_per_community = vec![0usize; num_communities];
        let mut stubborn_per_community = vec![0usize; num_communities];
        let mut regular = Vec::new();
        let mut stubborn = Vec::new();
        let mut regular_slot = vec![None; n];
        let mut stubborn_slot = vec![None; n];
        for (i, (&label, &role)) in labels.iter().zip(&roles).enumerate() {
            community_sizes[label] += 1;
            match role {
                Role::Regular => {
                    regular_per_community[label] += 1;
                    regular_slot[i] = Some(regular.len());
                    regular.push(i);
                }
                Role::Stubborn => {
                    stubborn_per_community[label] += 1;
                    stubborn_slot[i] = Some(stubborn.len());
                    stubborn.push(i);
                }
            }
        }
        for (k, &size) in community_sizes.iter().enumerate() {
            if size == 0 {
                return Err(ModelError::EmptyCommunity {
                    community: k,
                    num_communities,
                });
            }
            if regular_per_community[k] == 0 {
                return Err(ModelError::NoRegularAgent { community: k });
            }
        }
        for i in 0..n {
            match (roles[i], witness[i]) {
                (Role::Stubborn, None) => return Err(ModelError::MissingWitness { agent: i }),
                (Role::Stubborn, Some(j)) => {
                    if j >= n || roles[j] != Role::Regular || labels[j] != labels[i] {
                        return Err(ModelError::BadWitness {
                            agent: i,
                            witness: j,
                        });
                    }
                }
                (Role::Regular, _) => {}
            }
        }

        Ok(Self {
            labels,
            roles,
            witness,
            num_communities,
            regular,
            stubborn,
            regular_slot,
            stubborn_slot,
            community_sizes,
            regular_per_community,
            stubborn_per_community,
        })
    }

    /// Canonical sorted layout: for each community k, its regular agents
    /// first, then its stubborn agents, communities in order. Each stubborn
    /// agent's witness is the first regular agent of its community.
    pub fn sorted_blocks(counts: &[(usize, usize)]) -> Result<Self, ModelError> {
        let n: usize = counts.iter().map(|&(r, s)| r + s).sum();
        let mut labels = Vec::with_capacity(n);
        let mut roles = Vec::with_capacity(n);
        let mut witness = Vec::with_capacity(n);
        let mut first_regular = Vec::with_capacity(counts.len());
        let mut offset = 0usize;
        for (k, &(r, s)) in counts.iter().enumerate() {
            first_regular.push(offset);
            for _ in 0..r {
                labels.push(k);
                roles.push(Role::Regular);
                witness.push(None);
            }
            for _ in 0..s {
                labels.push(k);
                roles.push(Role::Stubborn);
                witness.push(Some(first_regular[k]));
            }
            offset += r + s;
        }
        Self::new(labels, roles, witness)
    }

    /// Relabels agents under a permutation of agent indices (`perm[new] =
    /// old`). Exposes a display/shuffle ordering without touching the
    /// canonical internal one.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, ModelError> {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length must match agent count");
        let mut inverse = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let labels = perm.iter().map(|&old| self.labels[old]).collect();
        let roles = perm.iter().map(|&old| self.roles[old]).collect();
        let witness = perm
            .iter()
            .map(|&old| self.witness[old].map(|w| inverse[w]))
            .collect();
        Self::new(labels, roles, witness)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn community_of(&self, agent: usize) -> usize {
        self.labels[agent]
    }

    pub fn is_regular(&self, agent: usize) -> bool {
        self.roles[agent] == Role::Regular
    }

    /// Witness regular agent for a stubborn agent; None for regular agents.
    pub fn witness_of(&self, agent: usize) -> Option<usize> {
        self.witness[agent]
    }

    /// Global indices of regular agents, defining the regular-slot order of
    /// state vectors and running averages.
    pub fn regular_agents(&self) -> &[usize] {
        &self.regular
    }

    pub fn stubborn_agents(&self) -> &[usize] {
        &self.stubborn
    }

    pub fn regular_slot(&self, agent: usize) -> Option<usize> {
        self.regular_slot[agent]
    }

    pub fn stubborn_slot(&self, agent: usize) -> Option<usize> {
        self.stubborn_slot[agent]
    }

    pub fn num_regular(&self) -> usize {
        self.regular.len()
    }

    pub fn num_stubborn(&self) -> usize {
        self.stubborn.len()
    }

    /// n_k: agents per community.
    pub fn community_sizes(&self) -> &[usize] {
        &self.community_sizes
    }

    /// n_rk: regular agents per community.
    pub fn regular_per_community(&self) -> &[usize] {
        &self.regular_per_community
    }

    /// n_sk: stubborn agents per community.
    pub fn stubborn_per_community(&self) -> &[usize] {
        &self.stubborn_per_community
    }

    /// True labels as {0,1} for two-community metrics.
    pub fn two_community_truth(&self) -> Vec<u8> {
        debug_assert_eq!(self.num_communities, 2);
        self.labels.iter().map(|&l| l as u8).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_blocks_counts_are_consistent() {
        let a = CommunityAssignment::sorted_blocks(&[(5, 1), (5, 1)]).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a.community_sizes(), &[6, 6]);
        assert_eq!(a.regular_per_community(), &[5, 5]);
        assert_eq!(a.stubborn_per_community(), &[1, 1]);
        assert_eq!(a.num_regular() + a.num_stubborn(), a.len());
        // stubborn agents sit after the regular block of their community
        assert_eq!(a.witness_of(5), Some(0));
        assert_eq!(a.witness_of(11), Some(6));
    }

    #[test]
    fn rejects_community_without_regular_agents() {
        // community 1 is all stubborn
        let labels = vec![0, 0, 1];
        let roles = vec![Role::Regular, Role::Regular, Role::Stubborn];
        let witness = vec![None, None, Some(1)];
        let err = CommunityAssignment::new(labels, roles, witness).unwrap_err();
        assert!(matches!(err, ModelError::NoRegularAgent { community: 1 }));

        let labels = vec![0, 0, 1];
        let roles = vec![Role::Regular, Role::Stubborn, Role::Regular];
        let witness = vec![None, Some(0), None];
        let a = CommunityAssignment::new(labels, roles, witness).unwrap();
        assert_eq!(a.stubborn_per_community(), &[1, 0]);
    }

    #[test]
    fn rejects_witness_in_other_community() {
        let labels = vec![0, 1, 1];
        let roles = vec![Role::Regular, Role::Regular, Role::Stubborn];
        let witness = vec![None, None, Some(0)];
        let err = CommunityAssignment::new(labels, roles, witness).unwrap_err();
        assert!(matches!(
            err,
            ModelError::BadWitness {
                agent: 2,
                witness: 0
            }
        ));
    }

    #[test]
    fn permutation_preserves_counts_and_witnesses() {
        let a = CommunityAssignment::sorted_blocks(&[(2, 1), (1, 1)]).unwrap();
        let perm = vec![4, 2, 0, 3, 1]; // new -> old
        let p = a.permuted(&perm).unwrap();
        assert_eq!(p.community_sizes(), a.community_sizes());
        assert_eq!(p.regular_per_community(), a.regular_per_community());
        for i in 0..p.len() {
            if let Some(w) = p.witness_of(i) {
                assert_eq!(p.community_of(w), p.community_of(i));
                assert!(p.is_regular(w));
            }
        }
    }
}
