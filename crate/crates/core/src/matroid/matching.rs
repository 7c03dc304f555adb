//! Bipartite matching by augmenting paths.

/// Maximum matching between `left` (a list of left nodes, each with its
/// adjacency list) and right nodes `0..right`. Returns, for every position
/// of `left`, the matched right node.
///
/// Left nodes are processed in the given order, so nodes earlier in the list
/// are never unmatched by later ones.
pub fn maximum_matching(adjacency: &[&[usize]], right: usize) -> Vec<Option<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; right];
    let mut visited = vec![false; right];
    for l in 0..adjacency.len() {
        visited.fill(false);
        augment(l, adjacency, &mut owner, &mut visited);
    }
    let mut matched = vec![None; adjacency.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            matched[*l] = Some(r);
        }
    }
    matched
}

/// True iff every left node can be matched simultaneously.
pub fn has_perfect_left_matching(adjacency: &[&[usize]], right: usize) -> bool {
    if adjacency.len() > right {
        return false;
    }
    maximum_matching(adjacency, right).iter().all(Option::is_some)
}

fn augment(
    l: usize,
    adjacency: &[&[usize]],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in adjacency[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match owner[r] {
            None => true,
            Some(other) => augment(other, adjacency, owner, visited),
        };
        if free {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmenting_path_reroutes_earlier_match() {
        // left 0 likes {0,1}, left 1 likes {0}: needs 0->1, 1->0.
        let adj: Vec<&[usize]> = vec![&[0, 1], &[0]];
        assert_eq!(maximum_matching(&adj, 2), vec![Some(1), Some(0)]);
        assert!(has_perfect_left_matching(&adj, 2));
    }

    #[test]
    fn star_matches_one() {
        let adj: Vec<&[usize]> = vec![&[0], &[0], &[0]];
        let m = maximum_matching(&adj, 1);
        assert_eq!(m.iter().flatten().count(), 1);
        assert!(!has_perfect_left_matching(&adj[..2], 1));
    }
}
