#pragma once

#define TDQO_VERSION_MAJOR 0
#define TDQO_VERSION_MINOR 1
#define TDQO_VERSION_PATCH 0
#define TDQO_VERSION "0.1.0"
