#include "tcurve/orbit.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <memory>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace tcurve {

const char* const kGeneratorConvention = "T:(r,u*r^-1) S:(u^-1,r)";

namespace {

constexpr int kShardBits = 6;
constexpr int kShards = 1 << kShardBits;
constexpr std::uint64_t kUnset = ~std::uint64_t(0);

std::uint64_t hash_key(const std::uint8_t* k, std::size_t len)
{
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= k[i];
        h *= 1099511628211ull;
    }
    h ^= h >> 31;
    h *= 0x7fb5d329728ea185ull;
    h ^= h >> 27;
    h *= 0x81dadef4bc2dd44dull;
    h ^= h >> 33;
    return h;
}

int shard_of(std::uint64_t h) { return static_cast<int>(h >> (64 - kShardBits)); }

std::uint64_t make_id(std::uint64_t local, int shard) { return (local << kShardBits) | shard; }
int id_shard(std::uint64_t id) { return static_cast<int>(id & (kShards - 1)); }
std::uint64_t id_local(std::uint64_t id) { return id >> kShardBits; }

template <class F>
void parallel_for(int jobs, std::size_t count, F&& body)
{
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int k = static_cast<int>(std::min<std::size_t>(jobs, count));
    for (int w = 0; w < k; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;)
                body(i, w);
        });
    for (auto& t : pool)
        t.join();
}

void put_u32(std::ostream& out, std::uint32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in)
{
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error("truncated orbit cache");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in)
{
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw std::runtime_error("truncated orbit cache");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

void put_str(std::ostream& out, const std::string& s)
{
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_str(std::istream& in)
{
    std::uint32_t len = get_u32(in);
    if (len > (1u << 20))
        throw std::runtime_error("corrupt orbit cache");
    std::string s(len, '\0');
    if (!in.read(s.data(), len))
        throw std::runtime_error("truncated orbit cache");
    return s;
}

// One slice of the visited set. Keys of locals in [base, count) live in the
// arena and the hash table; older locals were flushed to sorted run files.
struct Shard {
    std::size_t kb = 0;
    std::vector<std::uint8_t> arena;
    std::vector<std::uint32_t> table;  // (local - base) + 1, 0 = empty
    std::uint64_t base = 0, count = 0;
    std::vector<std::uint64_t> succ;  // T-successor id, per local
    std::vector<std::filesystem::path> runs;

    std::size_t memory() const { return arena.capacity() + table.capacity() * sizeof(std::uint32_t); }

    const std::uint8_t* key_at(std::uint64_t local) const { return arena.data() + (local - base) * kb; }

    std::int64_t find(const std::uint8_t* k, std::uint64_t h) const
    {
        if (table.empty())
            return -1;
        std::size_t mask = table.size() - 1;
        for (std::size_t s = h & mask;; s = (s + 1) & mask) {
            std::uint32_t e = table[s];
            if (e == 0)
                return -1;
            if (std::memcmp(arena.data() + std::size_t(e - 1) * kb, k, kb) == 0)
                return static_cast<std::int64_t>(base + e - 1);
        }
    }

    void rehash(std::size_t cap)
    {
        table.assign(cap, 0);
        std::size_t mask = cap - 1;
        std::uint64_t live = count - base;
        for (std::uint64_t i = 0; i < live; ++i) {
            std::uint64_t h = hash_key(arena.data() + i * kb, kb);
            std::size_t s = h & mask;
            while (table[s])
                s = (s + 1) & mask;
            table[s] = static_cast<std::uint32_t>(i + 1);
        }
    }

    std::uint64_t insert(const std::uint8_t* k, std::uint64_t h)
    {
        std::uint64_t live = count - base;
        if (live + 1 >= 0xffffffffull)
            throw std::runtime_error("shard too large; set a memory cap to spill");
        if (table.empty() || (live + 1) * 10 > table.size() * 7)
            rehash(std::max<std::size_t>(64, table.size() * 2));
        arena.insert(arena.end(), k, k + kb);
        std::size_t mask = table.size() - 1;
        std::size_t s = h & mask;
        while (table[s])
            s = (s + 1) & mask;
        table[s] = static_cast<std::uint32_t>(live + 1);
        succ.push_back(kUnset);
        return count++;
    }

    void flush(const std::filesystem::path& dir, int shard_index)
    {
        std::uint64_t live = count - base;
        if (live == 0)
            return;
        std::vector<std::uint64_t> order(live);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
            return std::memcmp(arena.data() + a * kb, arena.data() + b * kb, kb) < 0;
        });
        auto path = dir / ("run-" + std::to_string(shard_index) + "-" + std::to_string(runs.size()));
        std::ofstream out(path, std::ios::binary);
        for (std::uint64_t i : order) {
            out.write(reinterpret_cast<const char*>(arena.data() + i * kb), static_cast<std::streamsize>(kb));
            put_u64(out, base + i);
        }
        if (!out)
            throw std::runtime_error("cannot write spill run " + path.string());
        runs.push_back(path);
        base = count;
        std::vector<std::uint8_t>().swap(arena);
        std::vector<std::uint32_t>().swap(table);
    }

    // all (local, key) pairs in local order
    void for_each_key(const std::function<void(std::uint64_t, const std::uint8_t*)>& f) const
    {
        std::vector<std::uint8_t> old(base * kb);
        std::vector<char> buf(kb + 8);
        for (const auto& p : runs) {
            std::ifstream in(p, std::ios::binary);
            while (in.read(buf.data(), static_cast<std::streamsize>(kb))) {
                std::uint64_t local = get_u64(in);
                std::memcpy(old.data() + local * kb, buf.data(), kb);
            }
        }
        for (std::uint64_t l = 0; l < base; ++l)
            f(l, old.data() + l * kb);
        for (std::uint64_t l = base; l < count; ++l)
            f(l, key_at(l));
    }
};

struct Candidate {
    std::uint32_t offset;  // into the worker's key buffer for this shard
    std::uint64_t src;     // source id
    bool is_t;
};

struct Bucket {
    std::vector<std::uint8_t> keys;
    std::vector<Candidate> cands;
};

struct Engine {
    int n;
    std::size_t kb;
    int jobs;
    OrbitLimits limits;
    std::filesystem::path spill_dir;
    bool own_spill_dir = false;
    std::vector<Shard> shards;
    std::vector<std::uint8_t> frontier_keys;
    std::vector<std::uint64_t> frontier_ids;
    std::vector<std::uint64_t> height_sums;
    std::uint64_t processed = 0;
    std::uint64_t spilled = 0;

    Engine(int n_, int jobs_, OrbitLimits lim, std::filesystem::path spill)
        : n(n_), kb(key_bytes(n_)), jobs(std::max(1, jobs_)), limits(lim), shards(kShards),
          height_sums(n_ + 1, 0)
    {
        for (auto& s : shards)
            s.kb = kb;
        if (limits.max_memory) {
            std::random_device rd;
            auto base = spill.empty() ? std::filesystem::temp_directory_path() : spill;
            spill_dir = base / ("tcurve-spill-" + std::to_string(rd()) + std::to_string(rd()));
            std::filesystem::create_directories(spill_dir);
            own_spill_dir = true;
        }
    }

    ~Engine()
    {
        if (own_spill_dir) {
            std::error_code ec;
            std::filesystem::remove_all(spill_dir, ec);
        }
    }

    std::uint64_t visited() const
    {
        std::uint64_t v = 0;
        for (const auto& s : shards)
            v += s.count;
        return v;
    }

    std::size_t memory() const
    {
        std::size_t m = 0;
        for (const auto& s : shards)
            m += s.memory();
        return m;
    }

    std::uint64_t insert_new(const std::uint8_t* k)
    {
        std::uint64_t h = hash_key(k, kb);
        int s = shard_of(h);
        return make_id(shards[s].insert(k, h), s);
    }

    void maybe_spill()
    {
        if (!limits.max_memory || memory() <= limits.max_memory)
            return;
        for (int s = 0; s < kShards; ++s)
            shards[s].flush(spill_dir, s);
        ++spilled;
    }

    void seed(const std::uint8_t* key)
    {
        std::uint64_t id = insert_new(key);
        frontier_keys.assign(key, key + kb);
        frontier_ids.assign(1, id);
    }

    void level()
    {
        std::size_t fsize = frontier_ids.size();
        std::size_t chunks = std::min<std::size_t>(fsize, static_cast<std::size_t>(jobs) * 8);
        std::vector<std::vector<Bucket>> buckets(chunks, std::vector<Bucket>(kShards));
        std::vector<std::vector<std::uint64_t>> sums(chunks, std::vector<std::uint64_t>(n + 1, 0));

        parallel_for(jobs, chunks, [&](std::size_t c, int) {
            Canonicalizer canon(n);
            std::vector<int> r(n), u(n), rinv(n), img_r(n), img_u(n), scratch;
            std::vector<std::uint8_t> key(kb);
            std::size_t lo = fsize * c / chunks, hi = fsize * (c + 1) / chunks;
            auto& mine = buckets[c];
            for (std::size_t e = lo; e < hi; ++e) {
                const std::uint8_t* k = frontier_keys.data() + e * kb;
                std::uint64_t src = frontier_ids[e];
                decode_key(k, n, r.data(), u.data());
                accumulate_cylinders(n, r.data(), u.data(), sums[c], scratch);
                for (int i = 0; i < n; ++i)
                    rinv[r[i]] = i;
                for (int gen = 0; gen < 2; ++gen) {
                    bool is_t = gen == 0;
                    if (is_t) {
                        for (int i = 0; i < n; ++i)
                            img_u[i] = u[rinv[i]];
                        canon.canonical_key(r.data(), img_u.data(), key.data());
                    } else {
                        for (int i = 0; i < n; ++i)
                            img_r[u[i]] = i;
                        canon.canonical_key(img_r.data(), r.data(), key.data());
                    }
                    std::uint64_t h = hash_key(key.data(), kb);
                    int s = shard_of(h);
                    std::int64_t found = shards[s].find(key.data(), h);
                    if (found >= 0) {
                        if (is_t)
                            shards[id_shard(src)].succ[id_local(src)] = make_id(found, s);
                        continue;
                    }
                    auto& b = mine[s];
                    b.cands.push_back({static_cast<std::uint32_t>(b.keys.size()), src, is_t});
                    b.keys.insert(b.keys.end(), key.begin(), key.end());
                }
            }
        });
        processed += fsize;
        for (const auto& s : sums)
            for (int w = 0; w <= n; ++w)
                height_sums[w] += s[w];

        // resolve candidates shard by shard, in sorted key order
        std::vector<std::vector<std::uint8_t>> new_keys(kShards);
        std::vector<std::vector<std::uint64_t>> new_ids(kShards);
        std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> links(kShards);
        parallel_for(jobs, kShards, [&](std::size_t si, int) {
            struct Ref {
                const std::uint8_t* key;
                std::uint64_t src;
                bool is_t;
            };
            std::vector<Ref> refs;
            for (std::size_t c = 0; c < chunks; ++c) {
                const auto& b = buckets[c][si];
                for (const auto& cd : b.cands)
                    refs.push_back({b.keys.data() + cd.offset, cd.src, cd.is_t});
            }
            if (refs.empty())
                return;
            std::sort(refs.begin(), refs.end(), [&](const Ref& a, const Ref& b) {
                int cmp = std::memcmp(a.key, b.key, kb);
                if (cmp != 0)
                    return cmp < 0;
                if (a.src != b.src)
                    return a.src < b.src;
                return a.is_t < b.is_t;
            });
            // distinct keys
            std::vector<std::size_t> group_start;
            for (std::size_t i = 0; i < refs.size(); ++i)
                if (i == 0 || std::memcmp(refs[i].key, refs[i - 1].key, kb) != 0)
                    group_start.push_back(i);
            std::vector<std::uint64_t> resolved(group_start.size(), kUnset);
            Shard& sh = shards[si];
            std::vector<char> buf(kb);
            for (const auto& run : sh.runs) {
                std::ifstream in(run, std::ios::binary);
                std::size_t g = 0;
                bool have = static_cast<bool>(in.read(buf.data(), static_cast<std::streamsize>(kb)));
                std::uint64_t local = have ? get_u64(in) : 0;
                while (have && g < group_start.size()) {
                    int cmp = std::memcmp(buf.data(), refs[group_start[g]].key, kb);
                    if (cmp == 0) {
                        resolved[g] = make_id(local, static_cast<int>(si));
                        ++g;
                    } else if (cmp < 0) {
                        have = static_cast<bool>(in.read(buf.data(), static_cast<std::streamsize>(kb)));
                        if (have)
                            local = get_u64(in);
                    } else {
                        ++g;
                    }
                }
            }
            for (std::size_t g = 0; g < group_start.size(); ++g) {
                const std::uint8_t* k = refs[group_start[g]].key;
                if (resolved[g] == kUnset) {
                    std::uint64_t h = hash_key(k, kb);
                    resolved[g] = make_id(sh.insert(k, h), static_cast<int>(si));
                    new_keys[si].insert(new_keys[si].end(), k, k + kb);
                    new_ids[si].push_back(resolved[g]);
                }
                std::size_t end = g + 1 < group_start.size() ? group_start[g + 1] : refs.size();
                for (std::size_t i = group_start[g]; i < end; ++i)
                    if (refs[i].is_t)
                        links[si].push_back({refs[i].src, resolved[g]});
            }
        });
        for (const auto& l : links)
            for (auto [src, dst] : l)
                shards[id_shard(src)].succ[id_local(src)] = dst;
        frontier_keys.clear();
        frontier_ids.clear();
        for (int s = 0; s < kShards; ++s) {
            frontier_keys.insert(frontier_keys.end(), new_keys[s].begin(), new_keys[s].end());
            frontier_ids.insert(frontier_ids.end(), new_ids[s].begin(), new_ids[s].end());
        }
        maybe_spill();
    }

    std::map<std::uint64_t, std::uint64_t> cusps() const
    {
        std::map<std::uint64_t, std::uint64_t> widths;
        std::vector<std::vector<char>> seen(kShards);
        for (int s = 0; s < kShards; ++s)
            seen[s].assign(shards[s].count, 0);
        for (int s = 0; s < kShards; ++s) {
            for (std::uint64_t l = 0; l < shards[s].count; ++l) {
                if (seen[s][l])
                    continue;
                std::uint64_t start = make_id(l, s), id = start, len = 0;
                do {
                    int sh = id_shard(id);
                    std::uint64_t lo = id_local(id);
                    if (seen[sh][lo])
                        throw std::logic_error("T does not act as a permutation on the orbit");
                    seen[sh][lo] = 1;
                    ++len;
                    id = shards[sh].succ[lo];
                    if (id == kUnset)
                        throw std::logic_error("missing T-successor");
                } while (id != start);
                ++widths[len];
            }
        }
        return widths;
    }
};

struct CacheHeader {
    std::uint32_t version = 0, n = 0, width = 0, shard_count = 0, complete = 0;
    std::uint64_t visited = 0, processed = 0, frontier = 0;
    std::string convention, stratum, seed_key;
    std::vector<std::uint64_t> height_sums;
    std::uint64_t lattice_index = 1;
    std::map<std::uint64_t, std::uint64_t> cusp_widths;
    std::vector<std::uint64_t> shard_counts;
};

const char kMagic[8] = {'T', 'C', 'O', 'R', 'B', 'I', 'T', '1'};

CacheHeader read_header(std::istream& in)
{
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not an orbit cache file");
    CacheHeader h;
    h.version = get_u32(in);
    h.n = get_u32(in);
    h.width = get_u32(in);
    h.shard_count = get_u32(in);
    h.complete = get_u32(in);
    get_u32(in);
    h.visited = get_u64(in);
    h.processed = get_u64(in);
    h.frontier = get_u64(in);
    h.convention = get_str(in);
    h.stratum = get_str(in);
    h.seed_key.resize(key_bytes(static_cast<int>(h.n)));
    if (!in.read(h.seed_key.data(), static_cast<std::streamsize>(h.seed_key.size())))
        throw std::runtime_error("truncated orbit cache");
    std::uint32_t nw = get_u32(in);
    for (std::uint32_t i = 0; i < nw; ++i)
        h.height_sums.push_back(get_u64(in));
    h.lattice_index = get_u64(in);
    std::uint32_t nc = get_u32(in);
    for (std::uint32_t i = 0; i < nc; ++i) {
        std::uint64_t w = get_u64(in);
        h.cusp_widths[w] = get_u64(in);
    }
    std::uint32_t ns = get_u32(in);
    for (std::uint32_t i = 0; i < ns; ++i)
        h.shard_counts.push_back(get_u64(in));
    return h;
}

Rational moduli_from(const std::vector<std::uint64_t>& height_sums)
{
    Rational m = 0;
    for (std::size_t w = 1; w < height_sums.size(); ++w)
        if (height_sums[w])
            m += Rational(BigInt(height_sums[w]), BigInt(w));
    return m;
}

void write_cache(const std::filesystem::path& file, const Engine& e, const CacheHeader& h)
{
    std::filesystem::create_directories(file.parent_path());
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out.write(kMagic, 8);
        put_u32(out, kOrbitCodeVersion);
        put_u32(out, h.n);
        put_u32(out, static_cast<std::uint32_t>(key_width(static_cast<int>(h.n))));
        put_u32(out, kShards);
        put_u32(out, h.complete);
        put_u32(out, 0);
        put_u64(out, e.visited());
        put_u64(out, e.processed);
        put_u64(out, e.frontier_ids.size());
        put_str(out, kGeneratorConvention);
        put_str(out, h.stratum);
        out.write(h.seed_key.data(), static_cast<std::streamsize>(h.seed_key.size()));
        put_u32(out, static_cast<std::uint32_t>(e.height_sums.size()));
        for (auto v : e.height_sums)
            put_u64(out, v);
        put_u64(out, h.lattice_index);
        put_u32(out, static_cast<std::uint32_t>(h.cusp_widths.size()));
        for (auto [w, c] : h.cusp_widths) {
            put_u64(out, w);
            put_u64(out, c);
        }
        put_u32(out, kShards);
        for (const auto& s : e.shards)
            put_u64(out, s.count);
        for (int s = 0; s < kShards; ++s) {
            e.shards[s].for_each_key([&](std::uint64_t local, const std::uint8_t* k) {
                put_u64(out, make_id(local, s));
                put_u64(out, e.shards[s].succ[local]);
                out.write(reinterpret_cast<const char*>(k), static_cast<std::streamsize>(e.kb));
            });
        }
        for (std::size_t i = 0; i < e.frontier_ids.size(); ++i) {
            put_u64(out, e.frontier_ids[i]);
            out.write(reinterpret_cast<const char*>(e.frontier_keys.data() + i * e.kb),
                      static_cast<std::streamsize>(e.kb));
        }
        if (!out)
            throw std::runtime_error("cannot write orbit cache " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

void load_state(std::istream& in, const CacheHeader& h, Engine& e)
{
    if (h.shard_count != kShards || h.shard_counts.size() != kShards)
        throw std::runtime_error("orbit cache written with a different shard layout");
    std::vector<std::uint8_t> key(e.kb);
    std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> succs(kShards);
    for (std::uint64_t i = 0; i < h.visited; ++i) {
        std::uint64_t id = get_u64(in);
        std::uint64_t succ = get_u64(in);
        if (!in.read(reinterpret_cast<char*>(key.data()), static_cast<std::streamsize>(e.kb)))
            throw std::runtime_error("truncated orbit cache");
        std::uint64_t got = e.insert_new(key.data());
        if (got != id)
            throw std::runtime_error("orbit cache records out of order");
        succs[id_shard(id)].push_back({id_local(id), succ});
        e.maybe_spill();
    }
    for (int s = 0; s < kShards; ++s)
        for (auto [l, succ] : succs[s])
            e.shards[s].succ[l] = succ;
    e.frontier_ids.clear();
    e.frontier_keys.clear();
    for (std::uint64_t i = 0; i < h.frontier; ++i) {
        e.frontier_ids.push_back(get_u64(in));
        if (!in.read(reinterpret_cast<char*>(key.data()), static_cast<std::streamsize>(e.kb)))
            throw std::runtime_error("truncated orbit cache");
        e.frontier_keys.insert(e.frontier_keys.end(), key.begin(), key.end());
    }
    e.processed = h.processed;
    e.height_sums = h.height_sums;
}

}  // namespace

void accumulate_cylinders(int n, const int* r, const int* u, std::vector<std::uint64_t>& height_sums,
                          std::vector<int>& scratch)
{
    // scratch: row id per square, then union-find parent and width per row
    scratch.assign(3 * n, -1);
    int* row = scratch.data();
    int* parent = scratch.data() + n;
    int* width = scratch.data() + 2 * n;
    int rows = 0;
    for (int s = 0; s < n; ++s) {
        if (row[s] >= 0)
            continue;
        int w = 0;
        for (int x = s; row[x] < 0; x = r[x]) {
            row[x] = rows;
            ++w;
        }
        parent[rows] = rows;
        width[rows] = w;
        ++rows;
    }
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<char> done(rows, 0);
    for (int s = 0; s < n; ++s) {
        int k = row[s];
        if (done[k])
            continue;
        done[k] = 1;
        bool regular = true;
        int x = s;
        do {
            if (r[u[x]] != u[r[x]]) {
                regular = false;
                break;
            }
            x = r[x];
        } while (x != s);
        if (regular) {
            int a = find(k), b = find(row[u[s]]);
            if (a != b)
                parent[a] = b;
        }
    }
    // height of a cylinder = number of rows in its class
    std::vector<int> height(rows, 0);
    for (int k = 0; k < rows; ++k)
        ++height[find(k)];
    for (int k = 0; k < rows; ++k)
        if (height[k] > 0)
            height_sums[width[k]] += static_cast<std::uint64_t>(height[k]);
}

std::filesystem::path orbit_cache_file(const std::filesystem::path& dir, const CanonicalForm& seed)
{
    std::string material = seed.key + '\0' + kGeneratorConvention + '\0' + std::to_string(kOrbitCodeVersion);
    std::uint64_t h = hash_key(reinterpret_cast<const std::uint8_t*>(material.data()), material.size());
    char name[40];
    std::snprintf(name, sizeof name, "orbit-n%d-%016llx.bin", seed.n, static_cast<unsigned long long>(h));
    return dir / name;
}

OrbitSummary enumerate_orbit(const Origami& o, const OrbitOptions& options)
{
    if (!is_connected(o))
        throw std::invalid_argument("disconnected surface");
    OrbitSummary out;
    out.representative = canonical_form(o);
    out.stratum = stratum_of(o);
    out.lattice_index = period_lattice_index(o);
    const int n = o.size();

    CacheHeader header;
    header.n = static_cast<std::uint32_t>(n);
    header.stratum = out.stratum.label();
    header.seed_key = out.representative.key;
    header.lattice_index = out.lattice_index;

    std::filesystem::path cache_file;
    auto engine_ptr = std::make_unique<Engine>(n, options.jobs, options.limits, options.spill_dir);
    bool loaded = false;
    if (!options.cache_dir.empty()) {
        cache_file = orbit_cache_file(options.cache_dir, out.representative);
        if (std::filesystem::exists(cache_file)) {
            // an unreadable cache is discarded and the orbit recomputed
            try {
                std::ifstream in(cache_file, std::ios::binary);
                CacheHeader h = read_header(in);
                if (h.version == kOrbitCodeVersion && h.seed_key == header.seed_key &&
                    h.convention == kGeneratorConvention && h.n == header.n) {
                    if (h.complete) {
                        out.complete = true;
                        out.cache_hit = true;
                        out.index = h.visited;
                        out.processed = h.processed;
                        out.height_sums = h.height_sums;
                        out.moduli_sum = moduli_from(h.height_sums);
                        out.cusp_widths = h.cusp_widths;
                        for (auto [w, c] : h.cusp_widths)
                            out.cusp_count += c;
                        return out;
                    }
                    load_state(in, h, *engine_ptr);
                    loaded = true;
                    out.resumed = true;
                    out.cache_hit = true;
                }
            } catch (const std::exception&) {
                engine_ptr = std::make_unique<Engine>(n, options.jobs, options.limits, options.spill_dir);
                loaded = false;
                out.resumed = out.cache_hit = false;
            }
        }
    }
    Engine& engine = *engine_ptr;
    if (!loaded)
        engine.seed(reinterpret_cast<const std::uint8_t*>(out.representative.key.data()));

    bool complete = true;
    while (!engine.frontier_ids.empty()) {
        if (options.limits.max_size && engine.visited() > options.limits.max_size) {
            complete = false;
            break;
        }
        engine.level();
    }

    out.complete = complete;
    out.index = engine.visited();
    out.processed = engine.processed;
    out.height_sums = engine.height_sums;
    out.moduli_sum = moduli_from(engine.height_sums);
    out.spilled_runs = engine.spilled;
    if (complete) {
        out.cusp_widths = engine.cusps();
        for (auto [w, c] : out.cusp_widths)
            out.cusp_count += c;
    }
    if (!cache_file.empty()) {
        header.complete = complete ? 1 : 0;
        header.cusp_widths = out.cusp_widths;
        write_cache(cache_file, engine, header);
    }
    return out;
}

}  // namespace tcurve
