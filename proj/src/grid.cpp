#include "kw/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace kw {

int kernel_threads() {
    static const int nt = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw <= 0) hw = 1;
        int cap = std::min(hw, 8);
        if (const char *env = std::getenv("KW_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) cap = v;
        }
        return std::max(1, cap);
    }();
    return nt;
}

void for_site_ranges(long sites, const std::function<void(long, long)> &body) {
    int nt = kernel_threads();
    if (nt <= 1 || sites < 4096) {
        body(0, sites);
        return;
    }
    long chunk = (sites + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        long b = t * chunk, e = std::min(sites, b + chunk);
        if (b >= e) break;
        pool.emplace_back(body, b, e);
    }
    for (auto &th : pool) th.join();
}

double reduce_sites(long sites, const std::function<double(long)> &term) {
    // fixed chunk layout independent of thread count
    const long kChunk = 4096;
    long nchunks = (sites + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<size_t>(std::max<long>(nchunks, 1)), 0.0);
    auto run = [&](long cb, long ce) {
        for (long c = cb; c < ce; ++c) {
            double acc = 0.0;
            long b = c * kChunk, e = std::min(sites, b + kChunk);
            for (long i = b; i < e; ++i) acc += term(i);
            partial[static_cast<size_t>(c)] = acc;
        }
    };
    int nt = kernel_threads();
    if (nt <= 1 || nchunks < 2) {
        run(0, nchunks);
    } else {
        long per = (nchunks + nt - 1) / nt;
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) {
            long b = t * per, e = std::min(nchunks, b + per);
            if (b >= e) break;
            pool.emplace_back(run, b, e);
        }
        for (auto &th : pool) th.join();
    }
    return tree_sum(partial);
}

} // namespace kw
