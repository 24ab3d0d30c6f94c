#pragma once

#define DIVDIV_VERSION "0.1.0"
