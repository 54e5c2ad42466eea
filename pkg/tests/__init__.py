# Модуль тестов для выбора антенн в MIMO-каналах
