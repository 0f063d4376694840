#include "nids/schema.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "nids/errors.hpp"

namespace nids {

namespace {

const std::unordered_map<std::string, AttackCategory>& taxonomy() {
    // The four-category attack table. "pppmacro" is listed once, as R2L.
    static const std::unordered_map<std::string, AttackCategory> table = {
        {"normal", AttackCategory::Normal},
        // DoS
        {"apache2", AttackCategory::DoS},
        {"smurf", AttackCategory::DoS},
        {"neptune", AttackCategory::DoS},
        {"dosnuke", AttackCategory::DoS},
        {"land", AttackCategory::DoS},
        {"pod", AttackCategory::DoS},
        {"back", AttackCategory::DoS},
        {"teardrop", AttackCategory::DoS},
        {"tcprset", AttackCategory::DoS},
        {"syslogd", AttackCategory::DoS},
        {"crashiis", AttackCategory::DoS},
        {"arppoison", AttackCategory::DoS},
        {"mailbomb", AttackCategory::DoS},
        {"selfping", AttackCategory::DoS},
        {"processtable", AttackCategory::DoS},
        {"udpstorm", AttackCategory::DoS},
        {"warezclient", AttackCategory::DoS},
        // Probe
        {"portsweep", AttackCategory::Probe},
        {"ipsweep", AttackCategory::Probe},
        {"queso", AttackCategory::Probe},
        {"satan", AttackCategory::Probe},
        {"msscan", AttackCategory::Probe},
        {"ntinfoscan", AttackCategory::Probe},
        {"lsdomain", AttackCategory::Probe},
        {"illegal-sniffer", AttackCategory::Probe},
        // R2L
        {"dict", AttackCategory::R2L},
        {"netcat", AttackCategory::R2L},
        {"sendmail", AttackCategory::R2L},
        {"imap", AttackCategory::R2L},
        {"ncftp", AttackCategory::R2L},
        {"xlock", AttackCategory::R2L},
        {"xsnoop", AttackCategory::R2L},
        {"sshotrojan", AttackCategory::R2L},
        {"framespooof", AttackCategory::R2L},
        {"pppmacro", AttackCategory::R2L},
        {"guest", AttackCategory::R2L},
        {"netbus", AttackCategory::R2L},
        {"snmpget", AttackCategory::R2L},
        {"ftpwrite", AttackCategory::R2L},
        {"httptunnel", AttackCategory::R2L},
        {"phf", AttackCategory::R2L},
        {"named", AttackCategory::R2L},
        // U2R
        {"sechole", AttackCategory::U2R},
        {"xterm", AttackCategory::U2R},
        {"eject", AttackCategory::U2R},
        {"ps", AttackCategory::U2R},
        {"nukewp", AttackCategory::U2R},
        {"secret", AttackCategory::U2R},
        {"perl", AttackCategory::U2R},
        {"yaga", AttackCategory::U2R},
        {"fdformat", AttackCategory::U2R},
        {"ffbconfig", AttackCategory::U2R},
        {"casesen", AttackCategory::U2R},
        {"ntfdsdos", AttackCategory::U2R},
        {"loadmodule", AttackCategory::U2R},
        {"sqlattack", AttackCategory::U2R},
    };
    return table;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void fnv_mix(std::uint64_t& h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    h ^= 0xff;  // field separator
    h *= kFnvPrime;
}

}  // namespace

AttackCategory map_attack_category(std::string_view raw_label) {
    const auto& table = taxonomy();
    auto it = table.find(std::string(raw_label));
    if (it == table.end()) {
        throw DataError("unknown attack label: '" + std::string(raw_label) + "'");
    }
    return it->second;
}

const char* attack_category_name(AttackCategory c) {
    switch (c) {
        case AttackCategory::Normal: return "normal";
        case AttackCategory::DoS: return "dos";
        case AttackCategory::Probe: return "probe";
        case AttackCategory::R2L: return "r2l";
        case AttackCategory::U2R: return "u2r";
    }
    return "?";
}

FeatureSchema::FeatureSchema(std::vector<FeatureInfo> features,
                             std::vector<std::string> class_values,
                             bool has_difficulty_column)
    : features_(std::move(features)),
      class_values_(std::move(class_values)),
      has_difficulty_column_(has_difficulty_column) {
    if (class_values_.size() < 2) {
        throw DataError("schema needs at least 2 class values");
    }
    for (const auto& f : features_) {
        if (f.kind == FeatureKind::Nominal) {
            if (f.values.empty()) {
                throw DataError("nominal feature '" + f.name + "' has an empty value set");
            }
            std::unordered_set<std::string> seen(f.values.begin(), f.values.end());
            if (seen.size() != f.values.size()) {
                throw DataError("nominal feature '" + f.name + "' has duplicate values");
            }
        }
    }
}

int FeatureSchema::nominal_index(std::size_t feature, std::string_view value) const {
    const auto& vals = features_[feature].values;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == value) return static_cast<int>(i);
    }
    return -1;
}

int FeatureSchema::class_index(std::string_view label) const {
    for (std::size_t i = 0; i < class_values_.size(); ++i) {
        if (class_values_[i] == label) return static_cast<int>(i);
    }
    return -1;
}

std::uint64_t FeatureSchema::fingerprint() const {
    std::uint64_t h = kFnvOffset;
    for (const auto& f : features_) {
        fnv_mix(h, f.name);
        fnv_mix(h, f.kind == FeatureKind::Numeric ? "num" : "nom");
        for (const auto& v : f.values) fnv_mix(h, v);
    }
    fnv_mix(h, "|classes");
    for (const auto& c : class_values_) fnv_mix(h, c);
    return h;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
    if (class_values_ != other.class_values_) return false;
    if (features_.size() != other.features_.size()) return false;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name != other.features_[i].name ||
            features_[i].kind != other.features_[i].kind ||
            features_[i].values != other.features_[i].values) {
            return false;
        }
    }
    return true;
}

FeatureSchema nsl_kdd_schema(LabelMode mode) {
    auto numeric = [](const char* name) {
        return FeatureInfo{name, FeatureKind::Numeric, {}};
    };
    std::vector<FeatureInfo> f;
    f.reserve(41);
    f.push_back(numeric("duration"));
    f.push_back({"protocol_type", FeatureKind::Nominal, {"tcp", "udp", "icmp"}});
    f.push_back({"service",
                 FeatureKind::Nominal,
                 {"aol",        "auth",       "bgp",        "courier",  "csnet_ns",
                  "ctf",        "daytime",    "discard",    "domain",   "domain_u",
                  "echo",       "eco_i",      "ecr_i",      "efs",      "exec",
                  "finger",     "ftp",        "ftp_data",   "gopher",   "harvest",
                  "hostnames",  "http",       "http_2784",  "http_443", "http_8001",
                  "imap4",      "IRC",        "iso_tsap",   "klogin",   "kshell",
                  "ldap",       "link",       "login",      "mtp",      "name",
                  "netbios_dgm", "netbios_ns", "netbios_ssn", "netstat", "nnsp",
                  "nntp",       "ntp_u",      "other",      "pm_dump",  "pop_2",
                  "pop_3",      "printer",    "private",    "red_i",    "remote_job",
                  "rje",        "shell",      "smtp",       "sql_net",  "ssh",
                  "sunrpc",     "supdup",     "systat",     "telnet",   "tftp_u",
                  "tim_i",      "time",       "urh_i",      "urp_i",    "uucp",
                  "uucp_path",  "vmnet",      "whois",      "X11",      "Z39_50"}});
    f.push_back({"flag",
                 FeatureKind::Nominal,
                 {"OTH", "REJ", "RSTO", "RSTOS0", "RSTR", "S0", "S1", "S2", "S3",
                  "SF", "SH"}});
    f.push_back(numeric("src_bytes"));
    f.push_back(numeric("dst_bytes"));
    f.push_back(numeric("land"));
    f.push_back(numeric("wrong_fragment"));
    f.push_back(numeric("urgent"));
    f.push_back(numeric("hot"));
    f.push_back(numeric("num_failed_logins"));
    f.push_back(numeric("logged_in"));
    f.push_back(numeric("num_compromised"));
    f.push_back(numeric("root_shell"));
    f.push_back(numeric("su_attempted"));
    f.push_back(numeric("num_root"));
    f.push_back(numeric("num_file_creations"));
    f.push_back(numeric("num_shells"));
    f.push_back(numeric("num_access_files"));
    f.push_back(numeric("num_outbound_cmds"));
    f.push_back(numeric("is_host_login"));
    f.push_back(numeric("is_guest_login"));
    f.push_back(numeric("count"));
    f.push_back(numeric("srv_count"));
    f.push_back(numeric("serror_rate"));
    f.push_back(numeric("srv_serror_rate"));
    f.push_back(numeric("rerror_rate"));
    f.push_back(numeric("srv_rerror_rate"));
    f.push_back(numeric("same_srv_rate"));
    f.push_back(numeric("diff_srv_rate"));
    f.push_back(numeric("srv_diff_host_rate"));
    f.push_back(numeric("dst_host_count"));
    f.push_back(numeric("dst_host_srv_count"));
    f.push_back(numeric("dst_host_same_srv_rate"));
    f.push_back(numeric("dst_host_diff_srv_rate"));
    f.push_back(numeric("dst_host_same_src_port_rate"));
    f.push_back(numeric("dst_host_srv_diff_host_rate"));
    f.push_back(numeric("dst_host_serror_rate"));
    f.push_back(numeric("dst_host_srv_serror_rate"));
    f.push_back(numeric("dst_host_rerror_rate"));
    f.push_back(numeric("dst_host_srv_rerror_rate"));

    std::vector<std::string> classes;
    if (mode == LabelMode::Category5) {
        classes = {"normal", "dos", "probe", "r2l", "u2r"};
    } else {
        classes = {"normal", "anomaly"};
    }
    return FeatureSchema(std::move(f), std::move(classes), /*has_difficulty_column=*/true);
}

}  // namespace nids
