# Inicialización del paquete tools
