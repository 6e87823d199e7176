//! Sliding-window longest-match search: a 16-bit multiplicative hash over the
//! 3-byte minimum-match prefix, per-position chains to earlier positions with
//! the same hash, a run-length array that fast-forwards comparisons inside
//! long byte runs, and a per-position cache that memoizes full-limit queries.

use crate::symbols::{MAX_MATCH, MIN_MATCH, WINDOW_MASK, WINDOW_SIZE};

/// Chain visits per query; bounds worst-case time on degenerate inputs.
pub const MAX_CHAIN_HITS: usize = 8192;

/// sublen is indexed by match length, 0..=MAX_MATCH.
pub const SUBLEN_LEN: usize = MAX_MATCH + 1;

/// Distance run entries kept per cached position.
pub const CACHE_LENGTH: usize = 8;

const HASH_SIZE: usize = 65536;
const EMPTY: u32 = u32::MAX;

/// Which distance wins among equal-length matches. Chains are walked in
/// increasing distance order, so `SmallestDistance` keeps the first hit and
/// `LargestDistance` keeps updating on ties. Both policies stop as soon as
/// the limit length is reached, so ties between limit-length matches are not
/// explored; this bounds time on runs of one byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LargestDistance,
    SmallestDistance,
}

/// How a match's length is scored when the greedy parser decides whether the
/// match is worth taking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScorePolicy {
    #[default]
    Identity,
    DistancePenalty,
}

/// Identity returns the length; the penalty variant docks one point from
/// matches further than 1024 bytes back, where distance extra bits are dear.
pub fn length_score(length: u16, dist: u16, policy: ScorePolicy) -> u16 {
    match policy {
        ScorePolicy::Identity => length,
        ScorePolicy::DistancePenalty => {
            if dist > 1024 {
                length.saturating_sub(1)
            } else {
                length
            }
        }
    }
}

pub struct MatchFinder<'a> {
    data: &'a [u8],
    end: usize,
    /// Most recent position per hash bucket; EMPTY when unused.
    heads: Vec<u32>,
    /// Previous position with the same hash, indexed by position & WINDOW_MASK.
    prev: Vec<u32>,
    /// Hash each masked position was inserted under; detects slot reuse.
    hashval: Vec<u16>,
    /// Extra bytes equal to data[pos] directly after pos, capped at 0xFFFF.
    same: Vec<u16>,
    #[cfg(debug_assertions)]
    next_insert: usize,
}

fn hash_at(data: &[u8], pos: usize, end: usize) -> usize {
    let b0 = data[pos] as u32;
    let b1 = if pos + 1 < end { data[pos + 1] as u32 } else { 0 };
    let b2 = if pos + 2 < end { data[pos + 2] as u32 } else { 0 };
    let v = b0 | (b1 << 8) | (b2 << 16);
    (v.wrapping_mul(0x9E37_79B1) >> 16) as usize & (HASH_SIZE - 1)
}

/// Length of the common prefix of data[a..] and data[b..], stopping at a_end.
/// Requires b < a and a_end <= data.len(); compares 8 bytes at a time.
fn equal_prefix(data: &[u8], a: usize, b: usize, a_end: usize) -> usize {
    debug_assert!(b < a && a_end <= data.len());
    let start = a;
    let mut a = a;
    let mut b = b;
    while a + 8 <= a_end {
        let wa = u64::from_le_bytes(data[a..a + 8].try_into().unwrap());
        let wb = u64::from_le_bytes(data[b..b + 8].try_into().unwrap());
        let diff = wa ^ wb;
        if diff != 0 {
            return a - start + (diff.trailing_zeros() / 8) as usize;
        }
        a += 8;
        b += 8;
    }
    while a < a_end && data[a] == data[b] {
        a += 1;
        b += 1;
    }
    a - start
}

impl<'a> MatchFinder<'a> {
    /// A finder over `data[..end]`. Positions must then be inserted in
    /// increasing order, starting no later than the first queried position's
    /// window start.
    pub fn new(data: &'a [u8], end: usize) -> Self {
        assert!(end <= data.len());
        MatchFinder {
            data,
            end,
            heads: vec![EMPTY; HASH_SIZE],
            prev: vec![EMPTY; WINDOW_SIZE],
            hashval: vec![0; WINDOW_SIZE],
            same: vec![0; WINDOW_SIZE],
            #[cfg(debug_assertions)]
            next_insert: 0,
        }
    }

    pub fn end(&self) -> usize {
        self.end
    }

    /// Extra bytes equal to data[pos] directly after it, as recorded at
    /// insertion time. Only valid for positions inserted within the last
    /// window.
    pub fn same_run(&self, pos: usize) -> u16 {
        self.same[pos & WINDOW_MASK]
    }

    /// Registers `pos` as the newest entry for its hash and extends the
    /// run-length bookkeeping. Positions hash over bytes [pos, pos+2];
    /// missing bytes near the end count as zero.
    pub fn insert(&mut self, pos: usize) {
        debug_assert!(pos < self.end);
        #[cfg(debug_assertions)]
        {
            debug_assert!(pos >= self.next_insert, "insertions must be in increasing order");
            self.next_insert = pos + 1;
        }
        let h = hash_at(self.data, pos, self.end);
        let slot = pos & WINDOW_MASK;
        self.prev[slot] = self.heads[h];
        self.hashval[slot] = h as u16;
        self.heads[h] = pos as u32;

        let mut amount = 0usize;
        if pos > 0 && self.data[pos] == self.data[pos - 1] {
            let prev_same = self.same[(pos - 1) & WINDOW_MASK] as usize;
            if prev_same > 1 {
                amount = prev_same - 1;
            }
        }
        while pos + amount + 1 < self.end
            && self.data[pos] == self.data[pos + amount + 1]
            && amount < 0xFFFF
        {
            amount += 1;
        }
        self.same[slot] = amount as u16;
    }

    /// Longest match for `pos` against earlier window positions, length
    /// capped at `limit`. Returns (0, 0) when no match reaches MIN_MATCH.
    /// When `sublen` is given, sublen[l] is set to the smallest distance
    /// achieving each length l the best match grew through; it is the
    /// caller's job to hand in a zeroed array.
    ///
    /// Chains are walked newest-first, so candidate distances strictly
    /// increase; distance 32768 is never returned because a masked slot
    /// cannot distinguish it from the query position itself.
    pub fn find_longest_match(
        &self,
        pos: usize,
        limit: usize,
        mut sublen: Option<&mut [u16; SUBLEN_LEN]>,
        tie: TieBreak,
    ) -> (u16, u16) {
        let end = self.end;
        debug_assert!(pos < end);
        if end - pos < MIN_MATCH {
            return (0, 0);
        }
        let limit = limit.min(MAX_MATCH).min(end - pos);
        let h = hash_at(self.data, pos, end);
        debug_assert_eq!(self.hashval[pos & WINDOW_MASK], h as u16, "query before insert");

        let mut best_len = 2usize;
        let mut best_dist = 0usize;
        // Skip chain entries at or past pos. Parsers insert in lock-step with
        // their scan so at most pos itself is skipped here; a caller that
        // indexed more than a window past pos would find stale links instead.
        let mut cur = self.heads[h];
        while cur != EMPTY {
            let c = cur as usize;
            if c < pos {
                break;
            }
            let next = self.prev[c & WINDOW_MASK];
            cur = if next == EMPTY || next as usize >= c { EMPTY } else { next };
        }
        let mut budget = MAX_CHAIN_HITS;
        while cur != EMPTY {
            let c = cur as usize;
            debug_assert!(c < pos);
            let dist = pos - c;
            if dist >= WINDOW_SIZE || budget == 0 {
                break;
            }
            budget -= 1;
            if self.hashval[c & WINDOW_MASK] == h as u16 {
                // A candidate is only interesting if it can match at least
                // best_len (largest-distance ties update) or beat it
                // (smallest-distance keeps the first); one byte prechecks that.
                let check = match tie {
                    TieBreak::LargestDistance => best_len - 1,
                    TieBreak::SmallestDistance => best_len,
                };
                if pos + check >= end || self.data[c + check] == self.data[pos + check] {
                    let mut skip = 0usize;
                    if self.data[pos] == self.data[c] {
                        let same0 = self.same[pos & WINDOW_MASK] as usize;
                        if same0 > 2 {
                            let same1 = self.same[c & WINDOW_MASK] as usize;
                            skip = same0.min(same1).min(limit);
                        }
                    }
                    let len = skip + equal_prefix(self.data, pos + skip, c + skip, pos + limit);
                    debug_assert!(len <= limit);
                    if len > best_len {
                        if let Some(sub) = sublen.as_deref_mut() {
                            for slot in &mut sub[best_len + 1..=len] {
                                *slot = dist as u16;
                            }
                        }
                        best_len = len;
                        best_dist = dist;
                        if len >= limit {
                            break;
                        }
                    } else if tie == TieBreak::LargestDistance
                        && len == best_len
                        && len >= MIN_MATCH
                    {
                        best_dist = dist;
                    }
                }
            }
            let next = self.prev[c & WINDOW_MASK];
            if next == EMPTY || next as usize >= c {
                break;
            }
            cur = next;
        }
        if best_len >= MIN_MATCH {
            (best_len as u16, best_dist as u16)
        } else {
            (0, 0)
        }
    }
}

/// Memoized full-limit match results, one entry per position of a parse
/// range. Entries are written once: (1, 0) marks a slot never stored to,
/// (0, 0) a stored "no match". The per-length smallest distances are kept
/// as up to CACHE_LENGTH (run end, distance) triplets; matches with more
/// distinct distance runs only replay up to the last cached run.
pub struct LongestMatchCache {
    length: Vec<u16>,
    dist: Vec<u16>,
    sublen: Vec<u8>,
}

impl LongestMatchCache {
    pub fn new(blocksize: usize) -> Self {
        LongestMatchCache {
            length: vec![1; blocksize],
            dist: vec![0; blocksize],
            sublen: vec![0; CACHE_LENGTH * 3 * blocksize],
        }
    }

    fn filled(&self, p: usize) -> bool {
        self.length[p] == 0 || self.dist[p] != 0
    }

    fn sublen_slice(&self, p: usize) -> &[u8] {
        &self.sublen[p * CACHE_LENGTH * 3..(p + 1) * CACHE_LENGTH * 3]
    }

    /// Largest length whose distance is reconstructible; 0 when none cached.
    pub fn max_cached_sublen(&self, p: usize) -> usize {
        let c = self.sublen_slice(p);
        if c[1] == 0 && c[2] == 0 {
            0
        } else {
            c[(CACHE_LENGTH - 1) * 3] as usize + 3
        }
    }

    fn sublen_to_cache(&mut self, sub: &[u16; SUBLEN_LEN], p: usize, length: usize) {
        if length < MIN_MATCH {
            return;
        }
        let c = &mut self.sublen[p * CACHE_LENGTH * 3..(p + 1) * CACHE_LENGTH * 3];
        let mut j = 0usize;
        for i in MIN_MATCH..=length {
            if i == length || sub[i] != sub[i + 1] {
                c[j * 3] = (i - MIN_MATCH) as u8;
                c[j * 3 + 1] = (sub[i] & 0xFF) as u8;
                c[j * 3 + 2] = (sub[i] >> 8) as u8;
                j += 1;
                if j >= CACHE_LENGTH {
                    break;
                }
            }
        }
        if j < CACHE_LENGTH {
            debug_assert_eq!(c[(j - 1) * 3] as usize + MIN_MATCH, length);
            c[(CACHE_LENGTH - 1) * 3] = (length - MIN_MATCH) as u8;
        }
    }

    /// Rebuilds sublen[..=length] from the cached runs.
    pub fn cache_to_sublen(&self, p: usize, length: usize, sub: &mut [u16; SUBLEN_LEN]) {
        if length < MIN_MATCH {
            return;
        }
        let maxlength = self.max_cached_sublen(p);
        let c = self.sublen_slice(p);
        let mut prevlength = 0usize;
        for j in 0..CACHE_LENGTH {
            let len = c[j * 3] as usize + MIN_MATCH;
            let dist = c[j * 3 + 1] as u16 | ((c[j * 3 + 2] as u16) << 8);
            for slot in &mut sub[prevlength..=len] {
                *slot = dist;
            }
            if len == maxlength {
                break;
            }
            prevlength = len + 1;
        }
    }

    /// Replays a memoized query. On a hit the result is exactly what a fresh
    /// search would return: lengths above `limit` are capped and their
    /// distance read from the cached sublen. When the cache knows the final
    /// length but cannot reconstruct per-length distances the caller's limit
    /// is lowered to that length as a search hint and None is returned.
    pub fn try_get(
        &self,
        p: usize,
        limit: &mut usize,
        mut sublen: Option<&mut [u16; SUBLEN_LEN]>,
    ) -> Option<(u16, u16)> {
        if !self.filled(p) {
            return None;
        }
        let stored_len = self.length[p] as usize;
        let limit_ok = *limit == MAX_MATCH
            || stored_len <= *limit
            || (sublen.is_some() && self.max_cached_sublen(p) >= *limit);
        if !limit_ok {
            return None;
        }
        if sublen.is_none() || stored_len <= self.max_cached_sublen(p) {
            let length = stored_len.min(*limit);
            if let Some(sub) = sublen.as_deref_mut() {
                self.cache_to_sublen(p, length, sub);
                let dist = if length >= MIN_MATCH {
                    if length < stored_len {
                        sub[length]
                    } else {
                        self.dist[p]
                    }
                } else {
                    0
                };
                debug_assert!(length < MIN_MATCH || dist != 0);
                return Some((length as u16, dist));
            }
            return Some((length as u16, self.dist[p]));
        }
        // The final length is known even though per-length distances are
        // not: searching past it is pointless. Never raise the caller's cap.
        *limit = stored_len.min(*limit);
        None
    }

    /// Memoizes a full-limit query result. Only stores when the query ran at
    /// MAX_MATCH with a sublen buffer (partial results would poison replays)
    /// and the slot is still unwritten; a repeat store can only happen after
    /// a sublen-overflow miss, which re-derives the identical result.
    pub fn store(
        &mut self,
        p: usize,
        limit: usize,
        sublen: Option<&[u16; SUBLEN_LEN]>,
        length: u16,
        dist: u16,
    ) {
        if limit != MAX_MATCH {
            return;
        }
        let Some(sub) = sublen else { return };
        if self.filled(p) {
            return;
        }
        debug_assert!(self.length[p] == 1 && self.dist[p] == 0);
        if (length as usize) < MIN_MATCH {
            self.length[p] = 0;
            self.dist[p] = 0;
        } else {
            self.length[p] = length;
            self.dist[p] = dist;
            debug_assert!(!(self.length[p] == 1 && self.dist[p] == 0));
            self.sublen_to_cache(sub, p, length as usize);
        }
    }
}

/// Cache-aware query: replays a memoized result when possible, otherwise
/// searches and memoizes. `base` is the input offset of cache entry 0.
pub fn find_longest_match_cached(
    finder: &MatchFinder,
    cache: Option<&mut LongestMatchCache>,
    base: usize,
    pos: usize,
    limit: usize,
    mut sublen: Option<&mut [u16; SUBLEN_LEN]>,
    tie: TieBreak,
) -> (u16, u16) {
    let mut limit = limit;
    if let Some(cache) = cache {
        if let Some(hit) = cache.try_get(pos - base, &mut limit, sublen.as_deref_mut()) {
            return hit;
        }
        let (length, dist) = finder.find_longest_match(pos, limit, sublen.as_deref_mut(), tie);
        cache.store(pos - base, limit, sublen.as_deref(), length, dist);
        (length, dist)
    } else {
        finder.find_longest_match(pos, limit, sublen, tie)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inserted(data: &[u8]) -> MatchFinder<'_> {
        let mut f = MatchFinder::new(data, data.len());
        for pos in 0..data.len() {
            f.insert(pos);
        }
        f
    }

    fn chain_positions(f: &MatchFinder, h: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = f.heads[h];
        while cur != EMPTY {
            let c = cur as usize;
            out.push(c);
            let next = f.prev[c & WINDOW_MASK];
            if next == EMPTY || next as usize >= c {
                break;
            }
            cur = next;
        }
        out
    }

    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0
        }
    }

    /// O(n*W) scan over every distance; returns the longest length and, per
    /// length, the smallest distance achieving it.
    fn brute_force(data: &[u8], pos: usize, limit: usize) -> (usize, Vec<u16>) {
        let end = data.len();
        let limit = limit.min(MAX_MATCH).min(end - pos);
        let mut best = 0usize;
        let mut smallest = vec![0u16; SUBLEN_LEN];
        for dist in 1..=pos.min(WINDOW_SIZE - 1) {
            let mut len = 0usize;
            while len < limit && data[pos + len] == data[pos - dist + len] {
                len += 1;
            }
            for l in MIN_MATCH..=len {
                if smallest[l] == 0 {
                    smallest[l] = dist as u16;
                }
            }
            best = best.max(len);
        }
        (best, smallest)
    }

    #[test]
    fn identical_bytes_share_one_chain() {
        // Positions 0..=9 all hash the same 3 bytes; 10 and 11 hash with
        // zero padding for the bytes past the end and land elsewhere.
        let data = b"AAAAAAAAAAAA";
        let f = inserted(data);
        let h = hash_at(data, 0, data.len());
        assert_eq!(chain_positions(&f, h), vec![9, 8, 7, 6, 5, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn newest_insertion_is_the_head() {
        let data = b"XYZXYZ";
        let mut f = MatchFinder::new(data, data.len());
        for pos in 0..4 {
            f.insert(pos);
            let h = hash_at(data, pos, data.len());
            assert_eq!(f.heads[h] as usize, pos);
        }
    }

    #[test]
    fn every_position_is_reachable_from_its_head() {
        let mut rng = Rng(0x1234_5678_9ABC_DEF0);
        let data: Vec<u8> = (0..1024).map(|_| (rng.next() % 256) as u8).collect();
        let f = inserted(&data);
        for pos in 0..data.len() {
            let h = hash_at(&data, pos, data.len());
            assert!(
                chain_positions(&f, h).contains(&pos),
                "position {pos} missing from its chain"
            );
        }
    }

    #[test]
    fn repeated_block_matches_at_its_distance() {
        let data = b"ABCDEFGHIJABCDEFGHIJ";
        let f = inserted(data);
        assert_eq!(
            f.find_longest_match(10, MAX_MATCH, None, TieBreak::LargestDistance),
            (10, 10)
        );
        assert_eq!(
            f.find_longest_match(10, MAX_MATCH, None, TieBreak::SmallestDistance),
            (10, 10)
        );
    }

    #[test]
    fn longest_candidate_wins_regardless_of_distance() {
        // At position 10 the candidates are (4, dist 1), (3, dist 9) and
        // (5, dist 10); the length-5 match must win under both policies.
        let data = b"AAAABCDEFAAAAAB";
        let f = inserted(data);
        assert_eq!(brute_force(data, 10, MAX_MATCH).0, 5);
        for tie in [TieBreak::LargestDistance, TieBreak::SmallestDistance] {
            assert_eq!(f.find_longest_match(10, MAX_MATCH, None, tie), (5, 10), "{tie:?}");
        }
    }

    #[test]
    fn equal_length_tie_follows_the_policy() {
        // All of distances 1..=10 give exactly length 4 (the 'B' stops each).
        let data = b"AAAAAAAAAAAAAAB";
        let f = inserted(data);
        assert_eq!(
            f.find_longest_match(10, MAX_MATCH, None, TieBreak::LargestDistance),
            (4, 10)
        );
        assert_eq!(
            f.find_longest_match(10, MAX_MATCH, None, TieBreak::SmallestDistance),
            (4, 1)
        );
    }

    #[test]
    fn nothing_behind_position_zero() {
        let f = inserted(b"ABCABC");
        assert_eq!(f.find_longest_match(0, MAX_MATCH, None, TieBreak::LargestDistance), (0, 0));
    }

    #[test]
    fn short_tail_returns_no_match() {
        let data = b"ABAB";
        let f = inserted(data);
        // Two bytes remain at position 2: below MIN_MATCH.
        assert_eq!(f.find_longest_match(2, MAX_MATCH, None, TieBreak::LargestDistance), (0, 0));
    }

    #[test]
    fn scores_follow_the_policy() {
        assert_eq!(length_score(10, 10, ScorePolicy::Identity), 10);
        assert_eq!(length_score(0, 0, ScorePolicy::Identity), 0);
        assert_eq!(length_score(5, 2048, ScorePolicy::DistancePenalty), 4);
        assert_eq!(length_score(5, 1024, ScorePolicy::DistancePenalty), 5);
        assert_eq!(length_score(0, 0, ScorePolicy::DistancePenalty), 0);
    }

    #[test]
    fn same_run_lengths_count_following_equal_bytes() {
        let data = b"AAAAB";
        let f = inserted(data);
        assert_eq!(f.same[0], 3);
        assert_eq!(f.same[1], 2);
        assert_eq!(f.same[3], 0);
        assert_eq!(f.same[4], 0);
    }

    #[test]
    fn matches_agree_with_brute_force_oracle() {
        let mut rng = Rng(0xDEAD_BEEF_0BAD_F00D);
        for case in 0..300 {
            let n = 4 + (rng.next() % 253) as usize;
            let data: Vec<u8> = (0..n).map(|_| b"ABC"[(rng.next() % 3) as usize]).collect();
            let f = inserted(&data);
            for pos in 1..n.saturating_sub(MIN_MATCH - 1) {
                let (oracle_len, oracle_sub) = brute_force(&data, pos, MAX_MATCH);
                let mut sub = [0u16; SUBLEN_LEN];
                let (len, dist) =
                    f.find_longest_match(pos, MAX_MATCH, Some(&mut sub), TieBreak::LargestDistance);
                if oracle_len < MIN_MATCH {
                    assert_eq!((len, dist), (0, 0), "case {case} pos {pos}");
                } else {
                    assert_eq!(len as usize, oracle_len, "case {case} pos {pos}");
                    assert!(dist as usize <= pos && dist > 0);
                    let d = dist as usize;
                    for i in 0..len as usize {
                        assert_eq!(data[pos + i], data[pos - d + i]);
                    }
                    for l in MIN_MATCH..=len as usize {
                        assert_eq!(sub[l], oracle_sub[l], "case {case} pos {pos} len {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn cache_roundtrips_sublen_runs() {
        let mut cache = LongestMatchCache::new(4);
        let mut sub = [0u16; SUBLEN_LEN];
        // Three runs: lengths 3..=5 at dist 7, 6..=9 at dist 120, 10 at 3000.
        for l in 3..=5 {
            sub[l] = 7;
        }
        for l in 6..=9 {
            sub[l] = 120;
        }
        sub[10] = 3000;
        cache.store(1, MAX_MATCH, Some(&sub), 10, 3000);
        assert_eq!(cache.max_cached_sublen(1), 10);
        let mut rebuilt = [0u16; SUBLEN_LEN];
        cache.cache_to_sublen(1, 10, &mut rebuilt);
        for l in 3..=10 {
            assert_eq!(rebuilt[l], sub[l], "length {l}");
        }
    }

    #[test]
    fn cache_replays_hits_and_reports_unfilled_slots() {
        let mut cache = LongestMatchCache::new(3);
        let mut limit = MAX_MATCH;
        assert_eq!(cache.try_get(0, &mut limit, None), None);

        let mut sub = [0u16; SUBLEN_LEN];
        for l in 3..=12 {
            sub[l] = 42;
        }
        cache.store(0, MAX_MATCH, Some(&sub), 12, 42);
        let mut limit = MAX_MATCH;
        assert_eq!(cache.try_get(0, &mut limit, None), Some((12, 42)));

        // A capped query reads the distance out of the cached sublen.
        let mut limit = 5;
        let mut replay = [0u16; SUBLEN_LEN];
        assert_eq!(cache.try_get(0, &mut limit, Some(&mut replay)), Some((5, 42)));

        // Stored no-match replays as (0, 0).
        cache.store(1, MAX_MATCH, Some(&[0u16; SUBLEN_LEN]), 0, 0);
        let mut limit = MAX_MATCH;
        assert_eq!(cache.try_get(1, &mut limit, None), Some((0, 0)));
    }

    #[test]
    fn cache_ignores_partial_queries() {
        let mut cache = LongestMatchCache::new(1);
        let sub = [0u16; SUBLEN_LEN];
        cache.store(0, 100, Some(&sub), 50, 9);
        cache.store(0, MAX_MATCH, None, 50, 9);
        let mut limit = MAX_MATCH;
        assert_eq!(cache.try_get(0, &mut limit, None), None);
    }

    #[test]
    fn overflowing_sublen_runs_degrade_to_a_limit_hint() {
        // Eleven distinct runs cannot fit in eight cache slots, so a capped
        // sublen query beyond the cached range must miss and lower the limit.
        let mut cache = LongestMatchCache::new(1);
        let mut sub = [0u16; SUBLEN_LEN];
        for l in 3..=13 {
            sub[l] = (l * 100) as u16;
        }
        cache.store(0, MAX_MATCH, Some(&sub), 13, 1300);
        let max_cached = cache.max_cached_sublen(0);
        assert!(max_cached < 13, "max cached {max_cached}");
        let mut limit = MAX_MATCH;
        let mut replay = [0u16; SUBLEN_LEN];
        assert_eq!(cache.try_get(0, &mut limit, Some(&mut replay)), None);
        assert_eq!(limit, 13, "limit hint should be the stored length");
        // Capped sublen queries also miss (replays only serve matches whose
        // runs fit), but must never raise the caller's limit.
        let mut limit = max_cached;
        let mut replay = [0u16; SUBLEN_LEN];
        assert_eq!(cache.try_get(0, &mut limit, Some(&mut replay)), None);
        assert_eq!(limit, max_cached);
    }

    #[test]
    fn window_bound_is_respected() {
        // A copy exists at distance 40000, outside the window; the nearer
        // copy at distance 30000 must be found instead. The query sits at
        // the insertion frontier, as in real parsing.
        let pattern = b"UNIQUEPATTERNXYZ";
        let mut data = vec![0u8; 40016];
        let mut rng = Rng(0x5555_AAAA_5555_AAAA);
        for b in data.iter_mut() {
            *b = (rng.next() % 256) as u8;
        }
        data[0..16].copy_from_slice(pattern);
        data[10000..10016].copy_from_slice(pattern);
        data[40000..40016].copy_from_slice(pattern);
        let mut f = MatchFinder::new(&data, data.len());
        for pos in 0..=40000 {
            f.insert(pos);
        }
        let (len, dist) = f.find_longest_match(40000, MAX_MATCH, None, TieBreak::SmallestDistance);
        assert_eq!((len, dist), (16, 30000));
    }
}
