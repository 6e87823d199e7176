//! Token-stream producers: a greedy scan that always takes the longest match,
//! and a shortest-path parse that relaxes every reachable match length under
//! a fractional bit-cost model, iterated with refreshed symbol statistics.

use crate::entropy_coder::{calculate_block_size_auto_type, Histogram};
use crate::lz_store::TokenStore;
use crate::match_finder::{
    find_longest_match_cached, length_score, LongestMatchCache, MatchFinder, ScorePolicy,
    TieBreak, SUBLEN_LEN,
};
use crate::symbols::{
    dist_extra_bits, dist_symbol, length_extra_bits, length_symbol, DIST_BASE, END_OF_BLOCK,
    LENGTH_BASE, MAX_MATCH, MIN_MATCH, NUM_D, NUM_LL, WINDOW_SIZE,
};

/// Literal/length and distance symbol counts driving the cost model; the
/// end-of-block symbol is included once per block.
pub type SymbolStats = Histogram;

/// Counts every token's DEFLATE symbols plus one end-of-block.
pub fn compute_stats(store: &TokenStore) -> SymbolStats {
    Histogram::from_range(store, 0, store.len()).with_end_of_block()
}

/// Costs below this clamp would let the DP ride a zero-cost symbol for free.
const MIN_SYMBOL_COST: f64 = 1e-5;

/// Fractional bit cost per symbol. Literal cost never depends on distance;
/// match cost adds the fixed extra bits of both symbols when the model
/// accounts for them (the token-count model does not).
#[derive(Debug, Clone)]
pub struct SymbolCostModel {
    ll: [f64; NUM_LL],
    d: [f64; NUM_D],
    extra_bits: bool,
}

fn entropy_costs<const N: usize>(counts: &[usize; N]) -> [f64; N] {
    let total: usize = counts.iter().sum();
    let log2_total = (total.max(1) as f64).log2();
    let mut out = [0.0; N];
    for (slot, &count) in out.iter_mut().zip(counts.iter()) {
        // Unseen symbols are priced as if they occurred half a time, so the
        // DP may still pick them without dividing by zero.
        let cost = if count == 0 {
            log2_total + 1.0
        } else {
            log2_total - (count as f64).log2()
        };
        *slot = cost.max(MIN_SYMBOL_COST);
    }
    out
}

impl SymbolCostModel {
    /// Shannon costs -log2(count/total) from observed frequencies.
    pub fn from_stats(stats: &SymbolStats) -> Self {
        SymbolCostModel {
            ll: entropy_costs(&stats.litlen),
            d: entropy_costs(&stats.dist),
            extra_bits: true,
        }
    }

    /// Costs of the fixed trees: literal/length codes 7..9 bits, distance
    /// codes 5 bits, plus extra bits.
    pub fn fixed() -> Self {
        let lengths = crate::symbols::fixed_litlen_lengths();
        let mut ll = [0.0; NUM_LL];
        for (slot, &len) in ll.iter_mut().zip(lengths.iter()) {
            *slot = len as f64;
        }
        SymbolCostModel { ll, d: [5.0; NUM_D], extra_bits: true }
    }

    /// Every token costs 1: minimizing this minimizes the token count.
    pub fn uniform() -> Self {
        SymbolCostModel { ll: [1.0; NUM_LL], d: [0.0; NUM_D], extra_bits: false }
    }

    pub fn literal_cost(&self, byte: u8) -> f64 {
        self.ll[byte as usize]
    }

    pub fn match_cost(&self, length: u16, dist: u16) -> f64 {
        debug_assert!(dist > 0);
        let ls = length_symbol(length);
        let ds = dist_symbol(dist);
        let mut cost = self.ll[ls as usize] + self.d[ds as usize];
        if self.extra_bits {
            cost += length_extra_bits(ls) as f64 + dist_extra_bits(ds) as f64;
        }
        cost
    }

    /// Exact minimum of match_cost over all (length, distance) pairs, used
    /// to prune hopeless DP relaxations. Extra bits are constant within a
    /// symbol, so checking each symbol's base value covers everything.
    pub fn min_match_cost(&self) -> f64 {
        let mut min = f64::INFINITY;
        for &len in LENGTH_BASE.iter() {
            for &dist in DIST_BASE.iter() {
                min = min.min(self.match_cost(len, dist));
            }
        }
        min
    }
}

/// Match-search knobs shared by both parsers.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub tie: TieBreak,
    pub score: ScorePolicy,
}

/// True iff input[pos..pos+length) equals the bytes `dist` back under
/// overlap-copy semantics. Every emitted match must pass; a failure means
/// the parser itself is broken, so callers assert on it.
pub fn verify_len_dist(input: &[u8], pos: usize, length: u16, dist: u16) -> bool {
    let length = length as usize;
    let dist = dist as usize;
    if dist == 0 || dist > pos || pos + length > input.len() {
        return false;
    }
    (0..length).all(|i| input[pos + i] == input[pos - dist + i])
}

fn window_start(instart: usize) -> usize {
    instart.saturating_sub(WINDOW_SIZE)
}

fn warmed_finder(data: &[u8], instart: usize, inend: usize) -> MatchFinder<'_> {
    let mut finder = MatchFinder::new(data, inend);
    for pos in window_start(instart)..instart {
        finder.insert(pos);
    }
    finder
}

/// Greedy parse: at each position take the longest match if its score
/// reaches MIN_MATCH (storing the raw matched length), else a literal.
/// No lazy matching. Matches may reach up to a window before instart.
pub fn greedy_parse(
    data: &[u8],
    instart: usize,
    inend: usize,
    mut cache: Option<&mut LongestMatchCache>,
    opts: ParseOptions,
) -> TokenStore {
    let mut store = TokenStore::new();
    if instart == inend {
        return store;
    }
    let mut finder = warmed_finder(data, instart, inend);
    let mut sublen = [0u16; SUBLEN_LEN];
    let mut pos = instart;
    while pos < inend {
        finder.insert(pos);
        let (length, dist) = find_longest_match_cached(
            &finder,
            cache.as_deref_mut(),
            instart,
            pos,
            MAX_MATCH,
            Some(&mut sublen),
            opts.tie,
        );
        if length_score(length, dist, opts.score) as usize >= MIN_MATCH {
            assert!(
                verify_len_dist(data, pos, length, dist),
                "bad match: pos {pos} length {length} dist {dist}"
            );
            store.append_lit_len_dist(length, dist, pos).expect("valid match token");
            for j in 1..length as usize {
                finder.insert(pos + j);
            }
            pos += length as usize;
        } else {
            store.append_lit_len_dist(data[pos] as u16, 0, pos).expect("valid literal token");
            pos += 1;
        }
    }
    store
}

/// Shortest-path parse under `model`: a forward pass relaxes min_cost[i+1]
/// via a literal and min_cost[i+l] via every achievable match length l, then
/// a reverse traversal from inend reconstructs the cheapest token sequence.
/// Returns the store and its modeled cost, which equals min_cost[inend].
pub fn shortest_path_parse(
    data: &[u8],
    instart: usize,
    inend: usize,
    model: &SymbolCostModel,
    mut cache: Option<&mut LongestMatchCache>,
    opts: ParseOptions,
) -> (TokenStore, f64) {
    let n = inend - instart;
    let mut store = TokenStore::new();
    if n == 0 {
        return (store, 0.0);
    }

    let mut costs = vec![f64::INFINITY; n + 1];
    let mut best_length = vec![0u16; n + 1];
    costs[0] = 0.0;
    let min_match_cost = model.min_match_cost();

    let mut finder = warmed_finder(data, instart, inend);
    let mut sublen = [0u16; SUBLEN_LEN];
    let mut pos = instart;
    while pos < inend {
        finder.insert(pos);
        let mut j = pos - instart;

        // Deep inside a run of one byte every step costs one maximal match
        // at distance 1; assigning that directly skips the match searches.
        if pos > instart + MAX_MATCH + 1
            && pos + MAX_MATCH * 2 + 1 < inend
            && finder.same_run(pos) as usize > MAX_MATCH * 2
            && finder.same_run(pos - MAX_MATCH) as usize > MAX_MATCH
        {
            let symbol_cost = model.match_cost(MAX_MATCH as u16, 1);
            for _ in 0..MAX_MATCH {
                costs[j + MAX_MATCH] = costs[j] + symbol_cost;
                best_length[j + MAX_MATCH] = MAX_MATCH as u16;
                pos += 1;
                j += 1;
                finder.insert(pos);
            }
        }

        let (length, _) = find_longest_match_cached(
            &finder,
            cache.as_deref_mut(),
            instart,
            pos,
            MAX_MATCH,
            Some(&mut sublen),
            opts.tie,
        );

        let literal = costs[j] + model.literal_cost(data[pos]);
        if literal < costs[j + 1] {
            costs[j + 1] = literal;
            best_length[j + 1] = 1;
        }

        let kend = (length as usize).min(inend - pos);
        if kend >= MIN_MATCH {
            let prune_below = min_match_cost + costs[j];
            for k in MIN_MATCH..=kend {
                if costs[j + k] <= prune_below {
                    continue;
                }
                let cost = costs[j] + model.match_cost(k as u16, sublen[k]);
                if cost < costs[j + k] {
                    costs[j + k] = cost;
                    best_length[j + k] = k as u16;
                }
            }
        }
        pos += 1;
    }

    let total_cost = costs[n];
    debug_assert!(total_cost.is_finite());

    let mut path = Vec::new();
    let mut idx = n;
    while idx > 0 {
        let l = best_length[idx] as usize;
        debug_assert!(l >= 1 && l <= idx);
        path.push(l);
        idx -= l;
    }
    path.reverse();

    // Replay the path to recover each match's distance. The finder state at
    // any position is a function of the inserted prefix alone, so re-walking
    // reproduces exactly what the forward pass saw; the distance is read
    // from sublen so cache replays and fresh searches agree bit for bit.
    let mut finder = warmed_finder(data, instart, inend);
    let mut pos = instart;
    for &l in &path {
        finder.insert(pos);
        if l >= MIN_MATCH {
            let (length, _) = find_longest_match_cached(
                &finder,
                cache.as_deref_mut(),
                instart,
                pos,
                l,
                Some(&mut sublen),
                opts.tie,
            );
            assert_eq!(length as usize, l, "path length unreachable at {pos}");
            let dist = sublen[l];
            assert!(
                verify_len_dist(data, pos, l as u16, dist),
                "bad match: pos {pos} length {l} dist {dist}"
            );
            store.append_lit_len_dist(l as u16, dist, pos).expect("valid match token");
            for j in 1..l {
                finder.insert(pos + j);
            }
            pos += l;
        } else {
            store.append_lit_len_dist(data[pos] as u16, 0, pos).expect("valid literal token");
            pos += 1;
        }
    }
    debug_assert_eq!(pos, inend);
    (store, total_cost)
}

#[derive(Debug, Clone, Copy)]
pub struct IterateConfig {
    /// Entropy-model rounds; block splitting re-runs this whole loop per block.
    pub max_iterations: usize,
    /// Stop after this many rounds without a new best encoded size.
    pub patience: usize,
    pub tie: TieBreak,
    pub score: ScorePolicy,
    pub use_cache: bool,
    /// When set, stagnation perturbs the stats instead of stopping.
    pub perturb_seed: Option<u64>,
}

impl Default for IterateConfig {
    fn default() -> Self {
        IterateConfig {
            max_iterations: 100,
            patience: 5,
            tie: TieBreak::default(),
            score: ScorePolicy::default(),
            use_cache: true,
            perturb_seed: None,
        }
    }
}

/// One entropy-model round: the parse's encoded size and the best size so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationRecord {
    pub bits: u64,
    pub best_bits: u64,
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn perturb_stats(stats: &mut SymbolStats, state: &mut u64) {
    for i in 0..NUM_LL {
        if (xorshift(state) >> 4) % 3 == 0 {
            let j = (xorshift(state) % NUM_LL as u64) as usize;
            stats.litlen[i] = stats.litlen[j];
        }
    }
    for i in 0..NUM_D {
        if (xorshift(state) >> 4) % 3 == 0 {
            let j = (xorshift(state) % NUM_D as u64) as usize;
            stats.dist[i] = stats.dist[j];
        }
    }
    stats.litlen[END_OF_BLOCK] = stats.litlen[END_OF_BLOCK].max(1);
}

/// Iterated shortest-path parse: greedy seeds the statistics, each round
/// prices symbols by the previous parse's frequencies and reparses, and the
/// parse with the lowest actual encoded size (greedy included) wins. Stops
/// after `patience` rounds without improvement or at `max_iterations`.
pub fn iterate_optimal(
    data: &[u8],
    instart: usize,
    inend: usize,
    config: &IterateConfig,
) -> (TokenStore, Vec<IterationRecord>) {
    if instart == inend {
        return (TokenStore::new(), Vec::new());
    }
    let opts = ParseOptions { tie: config.tie, score: config.score };
    let mut cache = config.use_cache.then(|| LongestMatchCache::new(inend - instart));

    let greedy = greedy_parse(data, instart, inend, cache.as_mut(), opts);
    let mut stats = compute_stats(&greedy);
    let mut best_bits = calculate_block_size_auto_type(&greedy, 0, greedy.len());
    let mut best_store = greedy;

    let mut trace = Vec::new();
    let mut stale_rounds = 0usize;
    let mut perturb_state = config.perturb_seed.map(|s| if s == 0 { 0x9E37_79B9_7F4A_7C15 } else { s });

    for _ in 0..config.max_iterations {
        let model = SymbolCostModel::from_stats(&stats);
        let (store, _) = shortest_path_parse(data, instart, inend, &model, cache.as_mut(), opts);
        let bits = calculate_block_size_auto_type(&store, 0, store.len());
        if bits < best_bits {
            best_bits = bits;
            best_store = store.clone();
            stale_rounds = 0;
        } else {
            stale_rounds += 1;
        }
        trace.push(IterationRecord { bits, best_bits });
        stats = compute_stats(&store);
        if stale_rounds >= config.patience {
            match perturb_state.as_mut() {
                Some(state) => {
                    perturb_stats(&mut stats, state);
                    stale_rounds = 0;
                }
                None => break,
            }
        }
    }
    (best_store, trace)
}
