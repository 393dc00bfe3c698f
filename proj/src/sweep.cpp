#include "rydgate/sweep.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace rydgate {

namespace fs = std::filesystem;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

SweepStore::SweepStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    log_path_ = dir_ / "results.jsonl";
}

std::map<int, nlohmann::json> SweepStore::load() const {
    std::map<int, nlohmann::json> rows;
    std::ifstream in(log_path_);
    if (!in) return rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("index")) continue;  // torn write
        rows[j["index"].get<int>()] = j;
    }
    return rows;
}

void SweepStore::append(int index, const nlohmann::json& row) {
    nlohmann::json j = row;
    j["index"] = index;
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(log_path_, std::ios::app);
    out << j.dump() << "\n";
}

std::vector<nlohmann::json> run_sweep(int n_points,
                                      const std::function<nlohmann::json(int)>& point_fn,
                                      int workers, SweepStore* store, bool resume,
                                      int* failures) {
    std::vector<nlohmann::json> rows(static_cast<size_t>(std::max(n_points, 0)));
    std::map<int, nlohmann::json> done;
    if (store && resume) done = store->load();

    std::atomic<int> next{0};
    std::atomic<int> failed{0};
    std::mutex rows_mutex;

    auto work = [&] {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= n_points) return;
            nlohmann::json row;
            if (auto it = done.find(k); it != done.end()) {
                row = it->second;
                row["resumed"] = true;
            } else {
                try {
                    row = point_fn(k);
                } catch (const std::exception& e) {
                    row = nlohmann::json{{"ok", false}, {"error", e.what()}};
                }
                row["index"] = k;
                if (store) store->append(k, row);
            }
            if (row.contains("ok") && !row["ok"].get<bool>()) failed.fetch_add(1);
            std::lock_guard<std::mutex> lock(rows_mutex);
            rows[static_cast<size_t>(k)] = std::move(row);
        }
    };

    const int n_workers = std::max(1, std::min(workers, std::max(n_points, 1)));
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failures) *failures = failed.load();
    return rows;
}

namespace {

std::string csv_cell(const nlohmann::json& row, const std::string& key) {
    if (!row.contains(key)) return "";
    const auto& v = row.at(key);
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            quoted += '"';
            return quoted;
        }
        return s;
    }
    return v.dump();
}

}  // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& columns,
               const std::vector<nlohmann::json>& rows) {
    std::ostringstream out;
    for (size_t c = 0; c < columns.size(); ++c) {
        if (c) out << ',';
        out << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            out << csv_cell(row, columns[c]);
        }
        out << '\n';
    }
    write_text(path, out.str());
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const fs::path& dir, const nlohmann::json& config_echo,
                    const std::vector<fs::path>& files) {
    nlohmann::json manifest;
    manifest["version"] = kCodeVersion;
    manifest["config"] = config_echo;
    manifest["files"] = nlohmann::json::array();
    for (const auto& f : files) {
        char hex[20];
        std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64_file(f));
        manifest["files"].push_back({{"name", f.filename().string()},
                                     {"bytes", static_cast<long long>(fs::file_size(f))},
                                     {"fnv1a64", hex}});
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

bool verify_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) return false;
    nlohmann::json manifest;
    in >> manifest;
    const fs::path dir = manifest_path.parent_path();
    for (const auto& f : manifest.at("files")) {
        const fs::path p = dir / f.at("name").get<std::string>();
        if (!fs::exists(p)) return false;
        char hex[20];
        std::snprintf(hex, sizeof(hex), "%016" PRIx64, fnv1a64_file(p));
        if (f.at("fnv1a64").get<std::string>() != hex) return false;
        if (f.at("bytes").get<long long>() != static_cast<long long>(fs::file_size(p))) {
            return false;
        }
    }
    return true;
}

}  // namespace rydgate
