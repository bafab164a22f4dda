#include "ovid/vocabulary.hpp"

namespace ovid {

const std::vector<std::string>& default_top12_keys() {
    static const std::vector<std::string> keys{
        "building", "highway", "name",    "surface", "source",  "addr:housenumber",
        "addr:street", "natural", "landuse", "waterway", "amenity", "power",
    };
    return keys;
}

const std::vector<std::string>& default_valid_keys() {
    static const std::vector<std::string> keys{
        "building",        "source",           "highway",          "addr:housenumber",
        "addr:street",     "name",             "addr:city",        "addr:postcode",
        "natural",         "source:date",      "addr:country",     "landuse",
        "surface",         "power",            "waterway",         "building:levels",
        "amenity",         "oneway",           "wall",             "service",
        "barrier",         "height",           "access",           "ref",
        "maxspeed",        "lanes",            "layer",            "leisure",
        "addr:place",      "start_date",       "bridge",           "shop",
        "tracktype",       "operator",         "water",            "foot",
        "lit",             "addr:state",       "place",            "entrance",
        "bicycle",         "smoothness",       "wood",             "type",
        "width",           "crossing",         "note",             "roof:shape",
        "tunnel",          "railway",          "description",      "leaf_type",
        "addr:suburb",     "website",          "opening_hours",    "sidewalk",
        "phone",           "public_transport", "created_by",       "religion",
        "denomination",    "man_made",         "ele",              "denotation",
        "tourism",         "sport",            "cuisine",          "wikidata",
        "wikipedia",       "name:en",          "int_name",         "old_name",
        "alt_name",        "postal_code",      "level",            "covered",
        "motor_vehicle",   "parking",          "intermittent",     "admin_level",
        "boundary",        "route",            "network",          "area",
        "historic",        "office",           "craft",            "emergency",
        "healthcare",      "information",      "junction",         "voltage",
        "cables",          "circuits",         "frequency",        "line",
        "material",        "roof:colour",      "building:colour",  "fixme",
    };
    return keys;
}

std::string normalize_editor(std::string_view created_by) {
    const auto end = created_by.find_first_of(" /");
    return std::string(created_by.substr(0, end));
}

} // namespace ovid
