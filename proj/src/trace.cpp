#include "nlrd/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlrd/errors.hpp"

namespace nlrd {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string trace_to_csv(const DensityTrace& trace, bool with_stderr) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof(line), "# config_digest=%016llx\n",
                  static_cast<unsigned long long>(trace.config_hash));
    out += line;
    if (with_stderr) {
        out += "t,density,stderr,n_replicas\n";
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            const double se = i < trace.stderrs.size() ? trace.stderrs[i] : 0.0;
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d\n",
                          trace.times[i], trace.densities[i], se, trace.replicas);
            out += line;
        }
    } else {
        out += "t,density\n";
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g\n", trace.times[i],
                          trace.densities[i]);
            out += line;
        }
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot open output file: " + tmp.string());
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) throw ValidationError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace nlrd
