#ifndef RYDGATE_SWEEP_HPP
#define RYDGATE_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rydgate {

inline constexpr const char* kCodeVersion = "rydgate 0.1.0";

// Deterministic shortest round-trip formatting for file output.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// Append-only JSON-lines store of completed sweep points, keyed by grid
// index. Resume reads it back and skips finished indices.
class SweepStore {
public:
    explicit SweepStore(std::filesystem::path dir);

    std::map<int, nlohmann::json> load() const;
    void append(int index, const nlohmann::json& row);
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::filesystem::path log_path_;
    std::mutex mutex_;
};

// Evaluate grid points on a bounded worker pool; rows are merged by index,
// never by completion order. A null store disables persistence.
std::vector<nlohmann::json> run_sweep(int n_points,
                                      const std::function<nlohmann::json(int)>& point_fn,
                                      int workers, SweepStore* store, bool resume,
                                      int* failures = nullptr);

// CSV with a fixed column contract; missing fields render empty.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<nlohmann::json>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

// Manifest with config echo, code version and per-file checksums.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& config_echo,
                    const std::vector<std::filesystem::path>& files);
bool verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace rydgate

#endif
