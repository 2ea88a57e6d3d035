#include "ustatlab/common.hpp"

#include <cctype>
#include <cstdlib>
#include <thread>

namespace ustatlab {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long long n = 0, d = 0;
        try {
            n = std::stoll(text.substr(0, slash));
            d = std::stoll(text.substr(slash + 1));
        } catch (const std::exception&) {
            throw ParseError("bad rational: " + text);
        }
        return Rational(n, d);
    }
    auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            return Rational(std::stoll(text), 1);
        }
        std::string head = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad decimal: " + text);
        }
        if (frac.size() > 17) throw ParseError("decimal too long for exact rational: " + text);
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        bool neg = !head.empty() && head[0] == '-';
        long long whole = head.empty() || head == "-" || head == "+" ? 0 : std::stoll(head);
        long long num = whole * den + (neg ? -1 : 1) * (frac.empty() ? 0 : std::stoll(frac));
        return Rational(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad number: " + text);
    }
}

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (count <= 0) return;
    if (threads < 1) threads = 1;
    if (threads == 1 || count < 2) {
        body(0, count);
        return;
    }
    int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = w * chunk;
        std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

int default_thread_count() {
    if (const char* env = std::getenv("USTATLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ustatlab
