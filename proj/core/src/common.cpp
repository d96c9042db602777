#include "heis/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace heis {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::OutOfWindow: return "OutOfWindow";
        case ErrorCode::SingularPoint: return "SingularPoint";
        case ErrorCode::SingularStart: return "SingularStart";
        case ErrorCode::IntegratorStall: return "IntegratorStall";
        case ErrorCode::TooFewNodes: return "TooFewNodes";
        case ErrorCode::NotSingularApproach: return "NotSingularApproach";
        case ErrorCode::ZeroCurl: return "ZeroCurl";
        case ErrorCode::NonpositiveV: return "NonpositiveV";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::RayEscaped: return "RayEscaped";
        case ErrorCode::DegenerateSide: return "DegenerateSide";
        case ErrorCode::MissingSideData: return "MissingSideData";
        case ErrorCode::NoMatchedPairs: return "NoMatchedPairs";
        case ErrorCode::OpenRegion: return "OpenRegion";
        case ErrorCode::SingularOnLoop: return "SingularOnLoop";
        case ErrorCode::LiftJump: return "LiftJump";
        case ErrorCode::NotATangency: return "NotATangency";
        case ErrorCode::NonIsolated: return "NonIsolated";
        case ErrorCode::SingularTouchesBoundary: return "SingularTouchesBoundary";
        case ErrorCode::UnresolvedTangency: return "UnresolvedTangency";
        case ErrorCode::OutsideRegion: return "OutsideRegion";
        case ErrorCode::NewtonDiverged: return "NewtonDiverged";
        case ErrorCode::OrientationFlip: return "OrientationFlip";
        case ErrorCode::NotIntegrable: return "NotIntegrable";
        case ErrorCode::NonPositiveFactor: return "NonPositiveFactor";
        case ErrorCode::FoldedChart: return "FoldedChart";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HEIS_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace heis
